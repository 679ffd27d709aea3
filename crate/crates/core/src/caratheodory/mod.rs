//! Carathéodory–Pesin weights and critical values on cylinder-realizable
//! sets, their measure versions, the 5r-covering routine, and generic-point
//! approximations.

mod critical;
mod five_r;
mod generic;
mod measure_cp;
mod tree;

pub use critical::{
    bowen_critical, bowen_weight, bowen_weight_ln, packing_critical, packing_modified_critical,
    packing_modified_weight_ln, packing_weight, packing_weight_ln, CriticalSpec, CriticalValue, THETA_HIGH, THETA_LOW,
};
pub use five_r::{enlarge, five_r_disjointify, verify_five_r, word_ball, FiveRCheck};
pub use generic::{generic_count_ln, generic_leafset, packing_entropy_generic, GenericSpec};
pub use measure_cp::{
    katok_cp_cover, katok_cp_critical, katok_cp_lim, packing_cp_critical, packing_cp_lim, packing_cp_measure, CpValue,
    EXHAUSTIVE_NODES,
};
