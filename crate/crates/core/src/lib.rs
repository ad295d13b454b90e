//! Random bipartite density matrices and the separability criteria that
//! can be decided from them: positive partial transpose, reduction,
//! majorization, q-entropic conditional entropies and the low-rank PPT test.
//!
//! States are drawn as `U diag(lambda) U†` with Haar `U` and `lambda` uniform
//! on the simplex; [`survey`] tallies how often each criterion and each pair
//! of criteria agree over many such states.

// `!(x <= tol)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod plot;
pub mod report;
pub mod sampling;
pub mod state;
pub mod state_file;
pub mod survey;

pub use criteria::{evaluate_all, evaluate_all_with, CriteriaVerdict, Criterion, StateAnalysis, Tolerances};
pub use entropy::{EntropicIndex, EntropyReport};
pub use error::{Error, Result, SampleCoord};
pub use linalg::{herm_eig, kron, min_eig, numerical_rank, ComplexMatrix, Spectrum};
pub use sampling::{haar_unitary, sample_simplex, sample_state, simplex_point, RandomStream, Sampler, SamplerConfig};
pub use state::{partial_trace, partial_transpose, DensityMatrix, Subsystem, SystemDims};
pub use survey::{merge_records, run_survey, Statistic, SurveyConfig, SurveyRecord};
