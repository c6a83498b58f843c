//! Exchange algebras of a channel and the structure of its
//! Perron-Frobenius eigenspace.

mod algebra;
mod verify;

pub use algebra::{
    block_decompose, center, commutant, commutation_defect, max_principal_angle, span_dim, Block,
    OperatorAlgebra,
};
pub use verify::{
    algebra_a, algebra_b, algebra_c, verify_structure, verify_zeta_central, x_zeta_channel, zeta_data,
    Factorization, Inclusion, StructureReport, ZetaCentralReport, ZetaData, STRUCTURE_LIMIT,
};

pub(crate) use algebra::eigen_groups;
