//! Eigenvalue inequalities for products of special unitary matrices.
//!
//! The crate covers three layers:
//!
//! * [`schubert`] and [`quantum`]: classical and small quantum cohomology of
//!   complex Grassmannians, with Gromov–Witten numbers as structure constants.
//! * [`abw`], [`unitary`] and [`moment`]: the linear inequalities on
//!   conjugacy-class parameters of `SU(n)` that follow from non-vanishing
//!   Gromov–Witten numbers, the bi-invariant Finsler distance, and Monte-Carlo
//!   estimates of the `Υ_l` invariant they bound.
//! * [`karea`]: lattice connections on a cylinder, curvature norms and
//!   holonomy paths, realizing the duality between K-area and coarse length.

pub mod abw;
pub mod alcove;
pub mod error;
pub mod karea;
pub mod moment;
pub mod quantum;
pub mod schubert;
pub mod unitary;

pub use abw::{
    check_membership, enumerate_degree_range, enumerate_inequalities, sample_delta_margins, sample_delta_tuple,
    upsilon_lower_bound, AbwInequality, AbwRecord, DeltaSample, MembershipReport,
};
pub use alcove::AlcovePoint;
pub use error::{Error, ErrorKind, Result};
pub use karea::{
    coarse_length, connection_from_path, curvature_norm, holonomy_path_extract, karea_duality_check,
    reparameterize_arc, smooth_random_connection, CutoffProfile, DualityOptions, DualityReport, LatticeConnection,
};
pub use moment::{action_inequality_bridge, action_value, haar_mean_check, hamiltonian_value, Frame};
pub use quantum::{gw_invariant, quantum_pieri, quantum_product, GwQuery, QuantumClass, QuantumRing};
pub use schubert::{
    cup_product, dual_index, index_to_partition, lr_coefficient, partition_to_index, CohomologyElement, Partition,
    SchubertIndex,
};
pub use unitary::{
    alcove_of, class_representative, finsler_distance_to_id, haar_sample, product_class, su2_upsilon3_closed_form,
    upsilon_estimate, GroupPath, UnitaryMatrix, UpsilonEstimate,
};
