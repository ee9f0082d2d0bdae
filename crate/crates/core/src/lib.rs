//! Exact enumeration of tame friezes over Z/nZ.
//!
//! Friezes with entries in Z/nZ correspond to closed walks in the Farey
//! graph E_n, so counting friezes reduces to counting paths. This crate
//! provides the arithmetic substrate ([`modring`]), the graphs themselves
//! ([`fareygraph`]), path counting and lifting machinery ([`pathcount`]),
//! the closed-form counting formulas ([`formulas`]), and the frieze arrays
//! with their local rules ([`frieze`]).
//!
//! Every closed form has an independent brute-force counterpart, and the
//! two are cross-checked in this crate's test suites as well as by the
//! `frieze verify` command of the companion CLI.

pub mod fareygraph;
pub mod formulas;
pub mod frieze;
pub mod modring;
pub mod pathcount;

pub use fareygraph::{
    crt_iso_alpha, crt_iso_beta, edge_transporter, equivalent, is_edge, sl2_order, tensor_product,
    vertex_count_formula, vertex_lifts, DirectedEdge, FareyGraph, GraphError, Mat2, TensorGraph,
    Vertex,
};
pub use formulas::{
    phi_field, phi_m, regular_count_formula, tame_count_field, tame_count_formula, z_closed_form,
    FriezeCountQuery, FriezeKind,
};
pub use frieze::{
    reference_window_z5, render_from_path, FriezeError, FriezeWindow, RuleKind, RuleViolation,
};
pub use modring::{
    crt_combine, factorize, gcd, is_prime, q_binom2, q_bracket, totient, units, valuation,
    Factorization, ModRingError, PrimePower, Residue, Valuation,
};
pub use pathcount::{
    aux_graph_counts, count_masked_paths, count_paths, count_w, count_x, count_y, count_z,
    count_z_t, enumerate_masked_paths, enumerate_omega, enumerate_paths, has_liftable_subpath,
    is_omega_path, lift_paths, middle_vertex, omega_lift_mask, CountMethod, CountReport,
    LiftAnchor, OmegaLiftTarget, Path, PathCountError, PathFamilyQuery, TransferMask,
};
