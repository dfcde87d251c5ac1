//! The subspace `X`, its reduced basis `W`, and the Gale-dual pair `U`, `V`.

mod generic;
mod input;
mod matrices;

pub use generic::{
    generic_line_matroid, genericity_report, gr36_minor_values, matroid_of_v, nonzero_minor_columns, sample_generic,
    GenericityReport, SAMPLE_ENTRY_BOUND, SAMPLE_RETRY_CAP,
};
pub use input::{first_violated_relation, plucker_of_rowspace, SubspaceInput};
pub use matrices::{
    gale_check, gale_report, matrix_u, matrix_u_of, matrix_v, reduced_w, GaleReport, UMatrix, VMatrix, WMatrix,
};
