//! Separability predicates on a single bipartite state.
//!
//! Every predicate reduces to the sign of one real "margin" (a smallest
//! eigenvalue, a prefix-sum gap, a conditional entropy). A criterion holds
//! when its margin is `>= -crit_tol`; a margin within `±crit_tol` of zero is
//! additionally reported as a boundary case.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::entropy::{conditional_tsallis, validate_q};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, rank_of_spectrum, ComplexMatrix, Spectrum};
use crate::state::{DensityMatrix, Subsystem};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Sign threshold for every criterion margin.
    pub crit_tol: f64,
    /// Relative eigenvalue cut for the numerical rank.
    pub rank_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            crit_tol: 1e-10,
            rank_tol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_crit_tol(crit_tol: f64) -> Self {
        Tolerances {
            crit_tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Ppt,
    Reduction,
    Majorization,
    QEntropicInf,
    QEntropicFinite,
    RankSeparable,
}

impl Criterion {
    pub const ALL: [Criterion; 6] = [
        Criterion::Ppt,
        Criterion::Reduction,
        Criterion::Majorization,
        Criterion::QEntropicInf,
        Criterion::QEntropicFinite,
        Criterion::RankSeparable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Ppt => "ppt",
            Criterion::Reduction => "reduction",
            Criterion::Majorization => "majorization",
            Criterion::QEntropicInf => "q_entropic_inf",
            Criterion::QEntropicFinite => "q_entropic_finite",
            Criterion::RankSeparable => "rank_separable",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_owned()))
    }
}

/// Outcome of one sign test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub margin: f64,
    pub holds: bool,
    pub boundary: bool,
}

impl Decision {
    pub fn from_margin(margin: f64, crit_tol: f64) -> Self {
        Decision {
            margin,
            holds: margin >= -crit_tol,
            boundary: margin.abs() <= crit_tol,
        }
    }
}

/// Per-state verdict for every criterion.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CriteriaVerdict {
    pub ppt: bool,
    pub reduction: bool,
    pub majorization: bool,
    pub q_entropic_inf: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q_entropic_finite: Option<bool>,
    /// Sufficient condition: `true` certifies separability, `false` is inconclusive.
    pub rank_separable: bool,
    /// Reduction is violated, which certifies distillability.
    pub distillable: bool,
    pub boundary_flags: BTreeSet<Criterion>,
}

/// Spectra of `rho`, `rho_A` and `rho_B`, computed once and shared by all
/// criteria.
#[derive(Clone, Debug)]
pub struct StateAnalysis<'a> {
    rho: &'a DensityMatrix,
    rho_a: ComplexMatrix,
    rho_b: ComplexMatrix,
    joint: Spectrum,
    spec_a: Spectrum,
    spec_b: Spectrum,
}

impl<'a> StateAnalysis<'a> {
    pub fn new(rho: &'a DensityMatrix) -> Result<Self> {
        let rho_a = rho.partial_trace(Subsystem::A).into_matrix();
        let rho_b = rho.partial_trace(Subsystem::B).into_matrix();
        Ok(StateAnalysis {
            joint: herm_eig(rho.matrix())?,
            spec_a: herm_eig(&rho_a)?,
            spec_b: herm_eig(&rho_b)?,
            rho,
            rho_a,
            rho_b,
        })
    }

    pub fn joint_spectrum(&self) -> &Spectrum {
        &self.joint
    }

    pub fn marginal_spectrum(&self, which: Subsystem) -> &Spectrum {
        match which {
            Subsystem::A => &self.spec_a,
            Subsystem::B => &self.spec_b,
        }
    }

    /// Margin: smallest eigenvalue of `[1 ⊗ T](rho)`.
    pub fn ppt(&self, tol: &Tolerances) -> Result<Decision> {
        let pt = self.rho.partial_transpose(Subsystem::B);
        Ok(Decision::from_margin(herm_eig(&pt)?.min(), tol.crit_tol))
    }

    /// Margin: smaller of the lowest eigenvalues of `1 ⊗ rho_B - rho` and
    /// `rho_A ⊗ 1 - rho`.
    pub fn reduction(&self, tol: &Tolerances) -> Result<Decision> {
        let dims = self.rho.dims();
        let left = &kron(&ComplexMatrix::identity(dims.n_a), &self.rho_b) - self.rho.matrix();
        let right = &kron(&self.rho_a, &ComplexMatrix::identity(dims.n_b)) - self.rho.matrix();
        let margin = herm_eig(&left)?.min().min(herm_eig(&right)?.min());
        Ok(Decision::from_margin(margin, tol.crit_tol))
    }

    /// Margin: smallest prefix-sum gap `sum_{i<=k} lambda_i(rho_X) - sum_{i<=k} lambda_i(rho)`
    /// over `k < N` and `X ∈ {A, B}`, with the marginal spectrum zero-padded
    /// to length `N`. At `k = N` both sums are traces and the gap is
    /// identically zero, so it carries no information.
    pub fn majorization(&self, tol: &Tolerances) -> Decision {
        let n = self.joint.len();
        let joint = self.joint.prefix_sums(n);
        let margin = [&self.spec_a, &self.spec_b]
            .into_iter()
            .flat_map(|marginal| {
                let marginal = marginal.prefix_sums(n);
                let joint = &joint;
                (0..n.saturating_sub(1)).map(move |k| marginal[k] - joint[k])
            })
            .fold(f64::INFINITY, f64::min);
        Decision::from_margin(margin, tol.crit_tol)
    }

    /// Margin: `min_X lambda_max(rho_X) - lambda_max(rho)`, the sign of the
    /// conditional entropies in the `q → ∞` limit.
    pub fn q_entropic_inf(&self, tol: &Tolerances) -> Decision {
        let top = self.joint.max();
        let margin = (self.spec_a.max() - top).min(self.spec_b.max() - top);
        Decision::from_margin(margin, tol.crit_tol)
    }

    /// Margin: smaller of the two Tsallis conditional entropies at finite `q`.
    pub fn q_entropic(&self, q: f64, tol: &Tolerances) -> Result<Decision> {
        validate_q(q)?;
        let a_given_b = conditional_tsallis(&self.joint, &self.spec_b, q)?;
        let b_given_a = conditional_tsallis(&self.joint, &self.spec_a, q)?;
        Ok(Decision::from_margin(a_given_b.min(b_given_a), tol.crit_tol))
    }

    pub fn rank(&self, tol: &Tolerances) -> usize {
        rank_of_spectrum(&self.joint, tol.rank_tol)
    }

    /// PPT together with `rank(rho) <= max(n_A, n_B)`; carries the PPT margin.
    pub fn rank_separable(&self, ppt: Decision, tol: &Tolerances) -> Decision {
        let dims = self.rho.dims();
        let low_rank = self.rank(tol) <= dims.n_a.max(dims.n_b);
        Decision {
            holds: ppt.holds && low_rank,
            boundary: ppt.boundary && low_rank,
            ..ppt
        }
    }

    /// Runs every check once.
    pub fn verdict(&self, q_finite: Option<f64>, tol: &Tolerances) -> Result<CriteriaVerdict> {
        let ppt = self.ppt(tol)?;
        let reduction = self.reduction(tol)?;
        let majorization = self.majorization(tol);
        let q_inf = self.q_entropic_inf(tol);
        let q_fin = q_finite.map(|q| self.q_entropic(q, tol)).transpose()?;
        let rank_sep = self.rank_separable(ppt, tol);

        let mut boundary_flags = BTreeSet::new();
        for (criterion, decision) in [
            (Criterion::Ppt, Some(ppt)),
            (Criterion::Reduction, Some(reduction)),
            (Criterion::Majorization, Some(majorization)),
            (Criterion::QEntropicInf, Some(q_inf)),
            (Criterion::QEntropicFinite, q_fin),
            (Criterion::RankSeparable, Some(rank_sep)),
        ] {
            if decision.is_some_and(|d| d.boundary) {
                boundary_flags.insert(criterion);
            }
        }

        Ok(CriteriaVerdict {
            ppt: ppt.holds,
            reduction: reduction.holds,
            majorization: majorization.holds,
            q_entropic_inf: q_inf.holds,
            q_entropic_finite: q_fin.map(|d| d.holds),
            rank_separable: rank_sep.holds,
            distillable: !reduction.holds,
            boundary_flags,
        })
    }
}

pub fn check_ppt(rho: &DensityMatrix) -> Result<bool> {
    Ok(StateAnalysis::new(rho)?.ppt(&Tolerances::default())?.holds)
}

pub fn check_reduction(rho: &DensityMatrix) -> Result<bool> {
    Ok(StateAnalysis::new(rho)?.reduction(&Tolerances::default())?.holds)
}

pub fn check_majorization(rho: &DensityMatrix) -> Result<bool> {
    Ok(StateAnalysis::new(rho)?.majorization(&Tolerances::default()).holds)
}

pub fn check_q_entropic_inf(rho: &DensityMatrix) -> Result<bool> {
    Ok(StateAnalysis::new(rho)?.q_entropic_inf(&Tolerances::default()).holds)
}

pub fn check_q_entropic(rho: &DensityMatrix, q: f64) -> Result<bool> {
    validate_q(q)?;
    Ok(StateAnalysis::new(rho)?.q_entropic(q, &Tolerances::default())?.holds)
}

pub fn check_rank_separable(rho: &DensityMatrix) -> Result<bool> {
    let tol = Tolerances::default();
    let analysis = StateAnalysis::new(rho)?;
    let ppt = analysis.ppt(&tol)?;
    Ok(analysis.rank_separable(ppt, &tol).holds)
}

pub fn evaluate_all(rho: &DensityMatrix, q_finite: Option<f64>) -> Result<CriteriaVerdict> {
    evaluate_all_with(rho, q_finite, &Tolerances::default())
}

pub fn evaluate_all_with(rho: &DensityMatrix, q_finite: Option<f64>, tol: &Tolerances) -> Result<CriteriaVerdict> {
    if let Some(q) = q_finite {
        validate_q(q)?;
    }
    StateAnalysis::new(rho)?.verdict(q_finite, tol)
}
