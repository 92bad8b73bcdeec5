//! Lattice geometry: Hermite normal form, sublattices, exact sup-norm
//! enumeration and successive minima.

pub mod enumerate;
pub mod hnf;
pub mod sublattice;

pub use enumerate::{
    cmp_real, enumerate_by_norm, minkowski_sandwich_holds, point_order, points_within, shortest_points,
    successive_minima, sup_norm, sup_norm_enclosure, LatticePoint, MinimaResult, RANK_CAP,
};
pub use hnf::{hnf, integer_kernel, row_lattice_basis, Hnf};
pub use sublattice::{intersect, membership, Sublattice};
