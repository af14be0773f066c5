//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use cornerrank::ring::embed::matrix_unit;
use cornerrank::transforms::{reducer_from_full_corner, CornerSource, FullCornerReducer};
use cornerrank::zsolvers::{m2z, m2z_ring, ZReducer};
use cornerrank::{Elem, FullnessCertificate, Ring, RingRef};

pub fn m2_zmod(m: u64) -> RingRef {
    Ring::matrix(&Ring::zmod(m).expect("modulus"), 2).expect("size")
}

/// The reducer for `M_2(Z)` built from the integer reducer on `e_11`.
pub fn m2z_reducer() -> Arc<FullCornerReducer> {
    let m = m2z_ring();
    let u = |i, j| matrix_unit(&m, i, j, &Elem::int(1));
    let p = u(0, 0);
    let cert = FullnessCertificate::from_pairs(&m, &p, &[(u(0, 0), u(0, 0)), (u(1, 0), u(0, 1))]).expect("pairs");
    let b = Ring::corner(&m, &p).expect("corner");
    let red = Arc::new(ZReducer::corner(&b).expect("integer corner"));
    reducer_from_full_corner(&m, &p, CornerSource::Reducer(red), &cert).expect("pipeline")
}

/// A right unimodular triple over `M_2(Z)` whose first two entries are not.
pub fn m2z_row() -> Vec<Elem> {
    vec![m2z([[2, 0], [0, 2]]), m2z([[4, 6], [2, 8]]), m2z([[1, 0], [0, 1]])]
}
