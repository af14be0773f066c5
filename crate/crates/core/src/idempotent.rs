//! Idempotent calculus: orthogonality, order, (sub)equivalence with explicit
//! witnesses, direct sums, multiples and fullness.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ring::embed::{diagonal, diagonal_at, matrix_unit};
use crate::ring::ideal::two_sided_ideal_contains;
use crate::ring::{corner_generators, Elem, Ring, RingRef, DEFAULT_ENUMERATION_CAP};

/// An element `e` with `e * e = e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Idempotent {
    ring: RingRef,
    value: Elem,
}

impl Idempotent {
    pub fn new(ring: &RingRef, value: Elem) -> Result<Self> {
        ring.ensure_member(&value)?;
        if !ring.is_idempotent(&value) {
            return Err(Error::NotIdempotent(ring.show(&value)));
        }
        Ok(Idempotent {
            ring: ring.clone(),
            value,
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn into_value(self) -> Elem {
        self.value
    }
}

fn same_owner(p: &Idempotent, q: &Idempotent) -> Result<()> {
    if p.ring == q.ring {
        Ok(())
    } else {
        Err(Error::OwnerMismatch)
    }
}

/// Witness pair `a in pAq`, `b in qAp` for `p ~ q` (`ab = p`, `ba = q`) or
/// for `p <~ q` (`ab = p` only).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquivalenceWitness {
    pub a: Elem,
    pub b: Elem,
}

impl EquivalenceWitness {
    pub fn new(a: Elem, b: Elem) -> Self {
        EquivalenceWitness { a, b }
    }

    /// The trivial witness `(p, p)` for `p ~ p`.
    pub fn identity(p: &Elem) -> Self {
        EquivalenceWitness {
            a: p.clone(),
            b: p.clone(),
        }
    }

    /// Checks `a in pAq`, `b in qAp` and `ab = p`.
    pub fn verifies_subequivalence(&self, ring: &Ring, p: &Elem, q: &Elem) -> bool {
        ring.contains(&self.a)
            && ring.contains(&self.b)
            && ring.mul_all(&[p, &self.a, q]) == self.a
            && ring.mul_all(&[q, &self.b, p]) == self.b
            && &ring.mul(&self.a, &self.b) == p
    }

    /// Additionally checks `ba = q`.
    pub fn verifies_equivalence(&self, ring: &Ring, p: &Elem, q: &Elem) -> bool {
        self.verifies_subequivalence(ring, p, q) && &ring.mul(&self.b, &self.a) == q
    }

    /// `q ~ p` from `p ~ q`.
    pub fn reversed(&self) -> Self {
        EquivalenceWitness {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// `e ~ g` from `e ~ f` (self) and `f ~ g` (next).
    pub fn compose(&self, ring: &Ring, next: &EquivalenceWitness) -> Self {
        EquivalenceWitness {
            a: ring.mul(&self.a, &next.a),
            b: ring.mul(&next.b, &self.b),
        }
    }

    /// `e1 + e2 ~ f1 + f2` from `e1 ~ f1`, `e2 ~ f2` with `e1 ⊥ e2`, `f1 ⊥ f2`.
    pub fn orthogonal_sum(&self, ring: &Ring, other: &EquivalenceWitness) -> Self {
        EquivalenceWitness {
            a: ring.add(&self.a, &other.a),
            b: ring.add(&self.b, &other.b),
        }
    }

    /// The idempotent `ba`, which is `<= q` when the witness shows `p <~ q`.
    pub fn induced(&self, ring: &Ring) -> Elem {
        ring.mul(&self.b, &self.a)
    }
}

/// `pq = qp = 0`
pub fn orthogonal(p: &Idempotent, q: &Idempotent) -> Result<bool> {
    same_owner(p, q)?;
    let r = &p.ring;
    Ok(r.is_zero(&r.mul(&p.value, &q.value)) && r.is_zero(&r.mul(&q.value, &p.value)))
}

/// `p = pq = qp`
pub fn leq(p: &Idempotent, q: &Idempotent) -> Result<bool> {
    same_owner(p, q)?;
    Ok(leq_elems(&p.ring, &p.value, &q.value))
}

pub(crate) fn leq_elems(ring: &Ring, p: &Elem, q: &Elem) -> bool {
    &ring.mul(p, q) == p && &ring.mul(q, p) == p
}

pub(crate) fn orthogonal_elems(ring: &Ring, p: &Elem, q: &Elem) -> bool {
    ring.is_zero(&ring.mul(p, q)) && ring.is_zero(&ring.mul(q, p))
}

/// Elements of the skew corner `pAq` in coordinate order (finite rings).
pub fn skew_corner_elements(ring: &Ring, p: &Elem, q: &Elem) -> Result<Vec<Elem>> {
    if !ring.is_finite() {
        return Err(Error::Unsupported(
            "witness search needs a finite ring".into(),
        ));
    }
    let gens = corner_generators(ring, p, q);
    let span = ring.span(&gens, false);
    if span.order() > DEFAULT_ENUMERATION_CAP.into() {
        return Err(Error::CapExceeded {
            cardinality: span.order().to_string(),
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    Ok(ring.subgroup_elements(&span))
}

fn search(p: &Idempotent, q: &Idempotent, full: bool) -> Result<Option<EquivalenceWitness>> {
    same_owner(p, q)?;
    let r = &p.ring;
    let (pv, qv) = (&p.value, &q.value);
    let pq = skew_corner_elements(r, pv, qv)?;
    let qp = skew_corner_elements(r, qv, pv)?;
    for a in &pq {
        for b in &qp {
            if &r.mul(a, b) == pv && (!full || &r.mul(b, a) == qv) {
                return Ok(Some(EquivalenceWitness::new(a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

/// A witness for `p ~ q`, by exhaustive search in coordinate order.
pub fn equivalent(p: &Idempotent, q: &Idempotent) -> Result<Option<EquivalenceWitness>> {
    same_owner(p, q)?;
    if p.value == q.value {
        return Ok(Some(EquivalenceWitness::identity(&p.value)));
    }
    search(p, q, true)
}

/// A witness for `p <~ q`: `a in pAq`, `b in qAp` with `ab = p`.
pub fn subequivalent(p: &Idempotent, q: &Idempotent) -> Result<Option<EquivalenceWitness>> {
    same_owner(p, q)?;
    if leq_elems(&p.ring, &p.value, &q.value) {
        return Ok(Some(EquivalenceWitness::identity(&p.value)));
    }
    search(p, q, false)
}

/// Certificate that `1_A <~ t.p` inside `M_t(A)`: `alpha` is a row in
/// `1_A M_t(A) (t.p)`, `beta` a column in `(t.p) M_t(A) 1_A`, and
/// `alpha * beta = 1_A`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullnessCertificate {
    pub t: usize,
    pub alpha: Elem,
    pub beta: Elem,
}

impl FullnessCertificate {
    /// From pairs `(a_i, b_i)` with `sum a_i p b_i = 1`, normalized to
    /// `a_i p` and `p b_i`.
    pub fn from_pairs(a: &RingRef, p: &Elem, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let t = pairs.len();
        let mt = Ring::matrix(a, t)?;
        let mut alpha = mt.zero();
        let mut beta = mt.zero();
        for (i, (x, y)) in pairs.iter().enumerate() {
            alpha = mt.add(&alpha, &matrix_unit(&mt, 0, i, &a.mul(x, p)));
            beta = mt.add(&beta, &matrix_unit(&mt, i, 0, &a.mul(p, y)));
        }
        Ok(FullnessCertificate { t, alpha, beta })
    }

    /// Entries `(alpha_{1i}, beta_{i1})`.
    pub fn pairs(&self, a: &Ring) -> Vec<(Elem, Elem)> {
        let t = self.t;
        let _ = a;
        (0..t)
            .map(|i| {
                (
                    self.alpha.entries()[i].clone(),
                    self.beta.entries()[i * t].clone(),
                )
            })
            .collect()
    }

    pub fn verify(&self, a: &RingRef, p: &Elem) -> Result<bool> {
        if self.t == 0 {
            return Ok(false);
        }
        let mt = Ring::matrix(a, self.t)?;
        if !mt.contains(&self.alpha) || !mt.contains(&self.beta) {
            return Ok(false);
        }
        let one_a = matrix_unit(&mt, 0, 0, &a.one());
        let tp = diagonal_at(&mt, 0..self.t, p);
        let witness = EquivalenceWitness::new(self.alpha.clone(), self.beta.clone());
        Ok(witness.verifies_subequivalence(&mt, &one_a, &tp))
    }
}

/// Fullness test result: the two-sided closure decides fullness and, when
/// full, the least `t` with a certificate for `1_A <~ t.p` is returned.
#[derive(Debug, Clone, PartialEq)]
pub struct Fullness {
    pub full: bool,
    pub certificate: Option<FullnessCertificate>,
}

pub fn is_full(p: &Idempotent) -> Result<Fullness> {
    let a = &p.ring;
    if !a.is_finite() {
        return Err(Error::Unsupported(
            "fullness over an infinite ring is verify-only; supply a certificate".into(),
        ));
    }
    let full = two_sided_ideal_contains(a, &p.value, &a.one())?;
    if !full {
        return Ok(Fullness {
            full,
            certificate: None,
        });
    }
    let pairs = least_fullness_pairs(a, &p.value)?.ok_or_else(|| {
        Error::Invariant("ideal closure contains 1 but no sum of products reaches it".into())
    })?;
    Ok(Fullness {
        full,
        certificate: Some(FullnessCertificate::from_pairs(a, &p.value, &pairs)?),
    })
}

/// Shortest list of pairs `(a_i, b_i)`, `a_i in Ap`, `b_i in pA`, with
/// `sum a_i b_i = 1`, by breadth-first growth of the sum set.
fn least_fullness_pairs(a: &RingRef, p: &Elem) -> Result<Option<Vec<(Elem, Elem)>>> {
    let one = a.one();
    let left = skew_corner_elements(a, &one, p)?;
    let right = skew_corner_elements(a, p, &one)?;
    let mut products: Vec<(Elem, (Elem, Elem))> = Vec::new();
    let mut seen_products = HashMap::new();
    for x in &left {
        for y in &right {
            let v = a.mul(x, y);
            if !seen_products.contains_key(&v) {
                seen_products.insert(v.clone(), ());
                products.push((v, (x.clone(), y.clone())));
            }
        }
    }
    // reached value -> pairs realizing it
    let mut reached: HashMap<Elem, Vec<(Elem, Elem)>> = HashMap::new();
    let mut frontier: Vec<Elem> = Vec::new();
    for (v, w) in &products {
        if !reached.contains_key(v) {
            reached.insert(v.clone(), vec![w.clone()]);
            frontier.push(v.clone());
        }
    }
    loop {
        if let Some(w) = reached.get(&one) {
            return Ok(Some(w.clone()));
        }
        let mut next = Vec::new();
        for v in &frontier {
            let base = reached[v].clone();
            for (u, w) in &products {
                let s = a.add(v, u);
                if !reached.contains_key(&s) {
                    let mut ws = base.clone();
                    ws.push(w.clone());
                    reached.insert(s.clone(), ws);
                    next.push(s);
                }
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        frontier = next;
    }
}

/// `diag(p, q)` in `M_2(A)`.
pub fn direct_sum(p: &Idempotent, q: &Idempotent) -> Result<Idempotent> {
    same_owner(p, q)?;
    let m2 = Ring::matrix(&p.ring, 2)?;
    let v = diagonal(&m2, &[p.value.clone(), q.value.clone()]);
    Idempotent::new(&m2, v)
}

/// `diag(p, ..., p)` in `M_n(A)`.
pub fn n_times(n: usize, p: &Idempotent) -> Result<Idempotent> {
    if n < 1 {
        return Err(Error::InvalidSize(n));
    }
    let mn = Ring::matrix(&p.ring, n)?;
    let v = diagonal_at(&mn, 0..n, &p.value);
    Idempotent::new(&mn, v)
}

/// All idempotents of a finite ring, in enumeration order.
pub fn enumerate_idempotents(a: &RingRef) -> Result<Vec<Idempotent>> {
    let en = a.enumerate(DEFAULT_ENUMERATION_CAP)?;
    Ok(en
        .elements()
        .iter()
        .filter(|e| a.is_idempotent(e))
        .map(|e| Idempotent {
            ring: a.clone(),
            value: e.clone(),
        })
        .collect())
}
