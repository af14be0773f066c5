//! Matrix-ring plumbing: upper-left embeddings `M_n(B) -> M_N(B)`, matrix
//! units, block diagonals and slot shifts.

use super::{Elem, Ring, RingKind, RingRef};
use crate::error::{Error, Result};

/// Places `M_n(base)` into the upper-left block of `M_N(base)`.
#[derive(Debug, Clone)]
pub struct MatrixEmbedding {
    from: RingRef,
    to: RingRef,
}

fn full_matrix_parts(ring: &Ring) -> Result<(&RingRef, usize)> {
    match ring.kind() {
        RingKind::Matrix { base, n } => Ok((base, *n)),
        _ => Err(Error::Unsupported("expected a full matrix ring".into())),
    }
}

impl MatrixEmbedding {
    pub fn new(from: &RingRef, to_size: usize) -> Result<Self> {
        let (base, n) = full_matrix_parts(from)?;
        if to_size < n {
            return Err(Error::EmbedSize {
                from: n,
                to: to_size,
            });
        }
        Ok(MatrixEmbedding {
            from: from.clone(),
            to: Ring::matrix(base, to_size)?,
        })
    }

    /// Embedding between two existing matrix rings over the same base.
    pub fn between(from: &RingRef, to: &RingRef) -> Result<Self> {
        let (b1, n) = full_matrix_parts(from)?;
        let (b2, big) = full_matrix_parts(to)?;
        if b1 != b2 {
            return Err(Error::OwnerMismatch);
        }
        if big < n {
            return Err(Error::EmbedSize { from: n, to: big });
        }
        Ok(MatrixEmbedding {
            from: from.clone(),
            to: to.clone(),
        })
    }

    pub fn source(&self) -> &RingRef {
        &self.from
    }

    pub fn target(&self) -> &RingRef {
        &self.to
    }

    pub fn from_size(&self) -> usize {
        self.from.matrix_size().unwrap()
    }

    pub fn to_size(&self) -> usize {
        self.to.matrix_size().unwrap()
    }

    pub fn embed(&self, a: &Elem) -> Elem {
        let (n, big) = (self.from_size(), self.to_size());
        let base = self.to.matrix_base().unwrap();
        let src = a.entries();
        let mut v = vec![base.zero(); big * big];
        for i in 0..n {
            for j in 0..n {
                v[i * big + j] = src[i * n + j].clone();
            }
        }
        Elem::Mat(v)
    }

    /// Inverse of [`MatrixEmbedding::embed`] on its image.
    pub fn restrict(&self, a: &Elem) -> Result<Elem> {
        let (n, big) = (self.from_size(), self.to_size());
        let base = self.to.matrix_base().unwrap();
        let src = a.entries();
        for i in 0..big {
            for j in 0..big {
                if (i >= n || j >= n) && !base.is_zero(&src[i * big + j]) {
                    return Err(Error::NotAMember(format!(
                        "entry ({i},{j}) lies outside the upper-left {n}x{n} block"
                    )));
                }
            }
        }
        let mut v = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                v.push(src[i * big + j].clone());
            }
        }
        Ok(Elem::Mat(v))
    }
}

/// `embed(a, N)` for `a` in `M_n(base)`: returns the target ring and image.
pub fn embed(from: &RingRef, a: &Elem, to_size: usize) -> Result<(RingRef, Elem)> {
    from.ensure_member(a)?;
    let e = MatrixEmbedding::new(from, to_size)?;
    let img = e.embed(a);
    Ok((e.to, img))
}

/// The matrix with `value` at `(i, j)` and zeros elsewhere.
pub fn matrix_unit(ring: &Ring, i: usize, j: usize, value: &Elem) -> Elem {
    let n = ring.matrix_size().expect("matrix ring");
    let base = ring.matrix_base().unwrap();
    let mut v = vec![base.zero(); n * n];
    v[i * n + j] = value.clone();
    Elem::Mat(v)
}

/// Block diagonal with the given base entries, padded with zeros.
pub fn diagonal(ring: &Ring, entries: &[Elem]) -> Elem {
    let n = ring.matrix_size().expect("matrix ring");
    let base = ring.matrix_base().unwrap();
    assert!(entries.len() <= n, "too many diagonal entries");
    let mut v = vec![base.zero(); n * n];
    for (i, e) in entries.iter().enumerate() {
        v[i * n + i] = e.clone();
    }
    Elem::Mat(v)
}

/// `value` on the diagonal at each slot in `slots`.
pub fn diagonal_at(ring: &Ring, slots: impl IntoIterator<Item = usize>, value: &Elem) -> Elem {
    let n = ring.matrix_size().expect("matrix ring");
    let base = ring.matrix_base().unwrap();
    let mut v = vec![base.zero(); n * n];
    for s in slots {
        v[s * n + s] = value.clone();
    }
    Elem::Mat(v)
}

pub fn entry<'a>(ring: &Ring, a: &'a Elem, i: usize, j: usize) -> &'a Elem {
    let n = ring.matrix_size().expect("matrix ring");
    &a.entries()[i * n + j]
}

/// The partial isometry `sum_{i in slots} e_{i+d, i}` with identity entries.
pub fn shift_isometry(ring: &Ring, slots: impl IntoIterator<Item = usize>, d: usize) -> Result<Elem> {
    let n = ring.matrix_size().expect("matrix ring");
    let base = ring.matrix_base().unwrap();
    let one = base.one();
    let mut v = vec![base.zero(); n * n];
    for s in slots {
        if s + d >= n {
            return Err(Error::AmbientTooSmall {
                required: s + d + 1,
                available: n,
            });
        }
        v[(s + d) * n + s] = one.clone();
    }
    Ok(Elem::Mat(v))
}

/// Transpose of a matrix whose entries are all `0` or `1` of the base ring.
pub fn transpose(ring: &Ring, a: &Elem) -> Elem {
    let n = ring.matrix_size().expect("matrix ring");
    let src = a.entries();
    let mut v = src.to_vec();
    for i in 0..n {
        for j in 0..n {
            v[j * n + i] = src[i * n + j].clone();
        }
    }
    Elem::Mat(v)
}
