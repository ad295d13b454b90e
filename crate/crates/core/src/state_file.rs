//! Plain-text density matrix files.
//!
//! ```text
//! n_a n_b
//! i j re im
//! ...
//! ```
//!
//! Indices are 0-based and row-major over the `N = n_a * n_b` basis; entries
//! that are not listed are zero. Blank lines and lines starting with `#` are
//! ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HERMITIAN_TOL};
use crate::state::{DensityMatrix, SystemDims};

/// Largest total dimension a state file may declare.
pub const MAX_FILE_DIM: usize = 1024;

/// Trace deviation accepted from a file before renormalization.
pub const FILE_TRACE_TOL: f64 = 1e-6;

/// Parsed file contents before any physical validation.
#[derive(Clone, Debug, PartialEq)]
pub struct RawStateFile {
    pub dims: SystemDims,
    pub matrix: ComplexMatrix,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<T: std::str::FromStr>(line: usize, raw: Option<&str>, what: &str) -> Result<T> {
    let raw = raw.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| Error::parse(line, format!("cannot parse {what} from `{raw}`")))
}

/// Syntax-level parse: header, entry indices, duplicates and finiteness.
pub fn parse_raw(text: &str) -> Result<RawStateFile> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `n_a n_b` header"))?;
    let mut parts = header.split_whitespace();
    let n_a: usize = field(hline, parts.next(), "n_a")?;
    let n_b: usize = field(hline, parts.next(), "n_b")?;
    if parts.next().is_some() {
        return Err(Error::parse(hline, "header must contain exactly `n_a n_b`"));
    }
    if n_a == 0 || n_b == 0 {
        return Err(Error::parse(hline, "subsystem dimensions must be positive"));
    }
    let n = n_a
        .checked_mul(n_b)
        .filter(|&n| n <= MAX_FILE_DIM)
        .ok_or_else(|| Error::parse(hline, format!("total dimension exceeds {MAX_FILE_DIM}")))?;
    let dims = SystemDims { n_a, n_b };

    let mut matrix = ComplexMatrix::zeros(n);
    let mut seen = HashSet::new();
    for (lno, l) in lines {
        let mut parts = l.split_whitespace();
        let i: usize = field(lno, parts.next(), "row index")?;
        let j: usize = field(lno, parts.next(), "column index")?;
        let re: f64 = field(lno, parts.next(), "real part")?;
        let im: f64 = field(lno, parts.next(), "imaginary part")?;
        if parts.next().is_some() {
            return Err(Error::parse(lno, "expected `i j re im`"));
        }
        if i >= n || j >= n {
            return Err(Error::parse(lno, format!("index ({i}, {j}) outside {n}x{n} matrix")));
        }
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::parse(lno, "entry is not finite"));
        }
        if !seen.insert((i, j)) {
            return Err(Error::parse(lno, format!("duplicate entry ({i}, {j})")));
        }
        matrix.set(i, j, Complex64::new(re, im));
    }
    Ok(RawStateFile { dims, matrix })
}

/// Full load: Hermitian within tolerance, trace within [`FILE_TRACE_TOL`]
/// (then renormalized), positive semidefinite.
pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let RawStateFile { dims, matrix } = parse_raw(text)?;
    let defect = matrix.hermiticity_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(Error::NonHermitianInput { defect });
    }
    let trace = matrix.trace().re;
    if !((trace - 1.0).abs() <= FILE_TRACE_TOL) {
        return Err(Error::InvalidTrace { trace });
    }
    DensityMatrix::new(matrix.scale(1.0 / trace), dims)
}

/// Writes every nonzero entry with round-trip float formatting.
pub fn write_state(rho: &DensityMatrix) -> String {
    let dims = rho.dims();
    let mut out = format!("{} {}\n", dims.n_a, dims.n_b);
    let m = rho.matrix();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            let z = m.get(i, j);
            if z.re != 0.0 || z.im != 0.0 {
                let _ = writeln!(out, "{i} {j} {:?} {:?}", z.re, z.im);
            }
        }
    }
    out
}
