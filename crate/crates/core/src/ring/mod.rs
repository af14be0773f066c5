//! Exact rings: `Z/m`, the integers, matrix rings, upper-triangular matrix
//! rings, finite direct products and corner rings `pAp`.
//!
//! A [`Ring`] is an immutable descriptor shared behind an [`Arc`]; elements
//! are plain [`Elem`] payloads interpreted by the ring that owns them. Every
//! payload is canonical, so structural equality is ring equality.

pub mod additive;
pub mod embed;
mod finite;
pub mod ideal;
pub mod literal;
pub mod snf;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use additive::Subgroup;

pub use finite::Enumeration;

/// Finite rings up to this size keep their element enumeration cached.
pub const CACHE_CAP: u64 = 4096;
/// Finite rings up to this size also keep full addition/multiplication tables.
pub const TABLE_CAP: u64 = 256;
/// Default bound on the size of a ring that may be enumerated on demand.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 16;

/// A ring element payload.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    /// An arbitrary-precision integer.
    Int(BigInt),
    /// A residue in `0..m`.
    Res(u64),
    /// A square matrix, row-major.
    Mat(Vec<Elem>),
    /// A tuple, one entry per factor of a product.
    Tup(Vec<Elem>),
}

impl Elem {
    pub fn int(v: i64) -> Elem {
        Elem::Int(BigInt::from(v))
    }

    pub fn entries(&self) -> &[Elem] {
        match self {
            Elem::Mat(v) | Elem::Tup(v) => v,
            _ => panic!("scalar element has no entries"),
        }
    }

    pub fn as_int(&self) -> &BigInt {
        match self {
            Elem::Int(v) => v,
            _ => panic!("not an integer element"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Finite(BigUint),
    Infinite,
}

impl Cardinality {
    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinality::Finite(_))
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Cardinality::Finite(n) => n.to_u64(),
            Cardinality::Infinite => None,
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RingKind {
    ZMod { m: u64 },
    Integers,
    Matrix { base: RingRef, n: usize },
    /// Upper-triangular `n x n` matrices over `base`.
    Triangular { base: RingRef, n: usize },
    Product(Vec<RingRef>),
    Corner { ambient: RingRef, p: Elem },
}

pub type RingRef = Arc<Ring>;

/// An immutable ring descriptor.
#[derive(Debug)]
pub struct Ring {
    kind: RingKind,
    cardinality: Cardinality,
    moduli: Option<Vec<u64>>,
    enumeration: Option<Arc<Enumeration>>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Ring {
    fn finish(kind: RingKind, cardinality: Cardinality, moduli: Option<Vec<u64>>) -> RingRef {
        let mut ring = Ring {
            kind,
            cardinality,
            moduli,
            enumeration: None,
        };
        if let Some(n) = ring.cardinality.as_u64() {
            if n <= CACHE_CAP {
                ring.enumeration = Some(Arc::new(Enumeration::build(&ring, n <= TABLE_CAP)));
            }
        }
        Arc::new(ring)
    }

    pub fn zmod(m: u64) -> Result<RingRef> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Self::finish(
            RingKind::ZMod { m },
            Cardinality::Finite(BigUint::from(m)),
            Some(vec![m]),
        ))
    }

    pub fn integers() -> RingRef {
        Self::finish(RingKind::Integers, Cardinality::Infinite, None)
    }

    pub fn matrix(base: &RingRef, n: usize) -> Result<RingRef> {
        if n == 0 {
            return Err(Error::InvalidSize(n));
        }
        let cardinality = match &base.cardinality {
            Cardinality::Finite(b) => Cardinality::Finite(b.pow((n * n) as u32)),
            Cardinality::Infinite => Cardinality::Infinite,
        };
        let moduli = base.moduli.as_ref().map(|m| m.repeat(n * n));
        Ok(Self::finish(
            RingKind::Matrix {
                base: base.clone(),
                n,
            },
            cardinality,
            moduli,
        ))
    }

    pub fn triangular(base: &RingRef, n: usize) -> Result<RingRef> {
        if n == 0 {
            return Err(Error::InvalidSize(n));
        }
        let slots = n * (n + 1) / 2;
        let cardinality = match &base.cardinality {
            Cardinality::Finite(b) => Cardinality::Finite(b.pow(slots as u32)),
            Cardinality::Infinite => Cardinality::Infinite,
        };
        let moduli = base.moduli.as_ref().map(|m| m.repeat(slots));
        Ok(Self::finish(
            RingKind::Triangular {
                base: base.clone(),
                n,
            },
            cardinality,
            moduli,
        ))
    }

    pub fn product(factors: &[RingRef]) -> Result<RingRef> {
        if factors.is_empty() {
            return Err(Error::InvalidSize(0));
        }
        let mut card = BigUint::one();
        let mut finite = true;
        for f in factors {
            match &f.cardinality {
                Cardinality::Finite(n) => card *= n,
                Cardinality::Infinite => finite = false,
            }
        }
        let moduli = if finite {
            Some(
                factors
                    .iter()
                    .flat_map(|f| f.moduli.clone().unwrap())
                    .collect(),
            )
        } else {
            None
        };
        Ok(Self::finish(
            RingKind::Product(factors.to_vec()),
            if finite {
                Cardinality::Finite(card)
            } else {
                Cardinality::Infinite
            },
            moduli,
        ))
    }

    /// The corner ring `pAp`; its identity is `p`.
    pub fn corner(ambient: &RingRef, p: &Elem) -> Result<RingRef> {
        if !ambient.contains(p) {
            return Err(Error::NotAMember(ambient.show(p)));
        }
        if !ambient.is_idempotent(p) {
            return Err(Error::NotIdempotent(ambient.show(p)));
        }
        let cardinality = match &ambient.cardinality {
            Cardinality::Finite(_) => {
                let gens = corner_generators(ambient, p, p);
                let moduli = ambient.moduli.as_ref().unwrap();
                let coords: Vec<Vec<u64>> = gens.iter().map(|g| ambient.coords(g)).collect();
                Cardinality::Finite(Subgroup::generated_by(moduli, &coords, false).order())
            }
            Cardinality::Infinite => {
                if has_nonzero_integer_leaf(p) {
                    Cardinality::Infinite
                } else {
                    return Err(Error::Unsupported(
                        "corner of an infinite ring at a torsion idempotent".into(),
                    ));
                }
            }
        };
        Ok(Self::finish(
            RingKind::Corner {
                ambient: ambient.clone(),
                p: p.clone(),
            },
            cardinality,
            ambient.moduli.clone(),
        ))
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn cardinality(&self) -> &Cardinality {
        &self.cardinality
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality.is_finite()
    }

    /// Coordinate moduli of the additive group (finite rings only).
    pub fn moduli(&self) -> Option<&[u64]> {
        self.moduli.as_deref()
    }

    /// Size `n` when this is a (full or triangular) matrix ring.
    pub fn matrix_size(&self) -> Option<usize> {
        match &self.kind {
            RingKind::Matrix { n, .. } | RingKind::Triangular { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// Base ring when this is a (full or triangular) matrix ring.
    pub fn matrix_base(&self) -> Option<&RingRef> {
        match &self.kind {
            RingKind::Matrix { base, .. } | RingKind::Triangular { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn zero(&self) -> Elem {
        match &self.kind {
            RingKind::ZMod { .. } => Elem::Res(0),
            RingKind::Integers => Elem::Int(BigInt::zero()),
            RingKind::Matrix { base, n } | RingKind::Triangular { base, n } => {
                Elem::Mat(vec![base.zero(); n * n])
            }
            RingKind::Product(fs) => Elem::Tup(fs.iter().map(|f| f.zero()).collect()),
            RingKind::Corner { ambient, .. } => ambient.zero(),
        }
    }

    pub fn one(&self) -> Elem {
        match &self.kind {
            RingKind::ZMod { .. } => Elem::Res(1),
            RingKind::Integers => Elem::Int(BigInt::one()),
            RingKind::Matrix { base, n } | RingKind::Triangular { base, n } => {
                let mut v = vec![base.zero(); n * n];
                for i in 0..*n {
                    v[i * n + i] = base.one();
                }
                Elem::Mat(v)
            }
            RingKind::Product(fs) => Elem::Tup(fs.iter().map(|f| f.one()).collect()),
            RingKind::Corner { p, .. } => p.clone(),
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(v) => v.is_zero(),
            Elem::Res(v) => *v == 0,
            Elem::Mat(v) | Elem::Tup(v) => match &self.kind {
                RingKind::Matrix { base, .. } | RingKind::Triangular { base, .. } => {
                    v.iter().all(|x| base.is_zero(x))
                }
                RingKind::Product(fs) => v.iter().zip(fs).all(|(x, f)| f.is_zero(x)),
                RingKind::Corner { ambient, .. } => ambient.is_zero(a),
                _ => false,
            },
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (RingKind::ZMod { m }, Elem::Res(x), Elem::Res(y)) => {
                Elem::Res(((*x as u128 + *y as u128) % *m as u128) as u64)
            }
            (RingKind::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (
                RingKind::Matrix { base, .. } | RingKind::Triangular { base, .. },
                Elem::Mat(x),
                Elem::Mat(y),
            ) => Elem::Mat(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect()),
            (RingKind::Product(fs), Elem::Tup(x), Elem::Tup(y)) => Elem::Tup(
                x.iter()
                    .zip(y)
                    .zip(fs)
                    .map(|((u, v), f)| f.add(u, v))
                    .collect(),
            ),
            (RingKind::Corner { ambient, .. }, _, _) => ambient.add(a, b),
            _ => panic!("element shape does not match ring"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.kind, a) {
            (RingKind::ZMod { m }, Elem::Res(x)) => Elem::Res((m - x) % m),
            (RingKind::Integers, Elem::Int(x)) => Elem::Int(-x),
            (RingKind::Matrix { base, .. } | RingKind::Triangular { base, .. }, Elem::Mat(x)) => {
                Elem::Mat(x.iter().map(|u| base.neg(u)).collect())
            }
            (RingKind::Product(fs), Elem::Tup(x)) => {
                Elem::Tup(x.iter().zip(fs).map(|(u, f)| f.neg(u)).collect())
            }
            (RingKind::Corner { ambient, .. }, _) => ambient.neg(a),
            _ => panic!("element shape does not match ring"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (RingKind::ZMod { m }, Elem::Res(x), Elem::Res(y)) => {
                Elem::Res(((*x as u128 * *y as u128) % *m as u128) as u64)
            }
            (RingKind::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (
                RingKind::Matrix { base, n } | RingKind::Triangular { base, n },
                Elem::Mat(x),
                Elem::Mat(y),
            ) => {
                let n = *n;
                let mut out = vec![base.zero(); n * n];
                for i in 0..n {
                    for k in 0..n {
                        let aik = &x[i * n + k];
                        if base.is_zero(aik) {
                            continue;
                        }
                        for j in 0..n {
                            let bkj = &y[k * n + j];
                            if base.is_zero(bkj) {
                                continue;
                            }
                            let prod = base.mul(aik, bkj);
                            out[i * n + j] = base.add(&out[i * n + j], &prod);
                        }
                    }
                }
                Elem::Mat(out)
            }
            (RingKind::Product(fs), Elem::Tup(x), Elem::Tup(y)) => Elem::Tup(
                x.iter()
                    .zip(y)
                    .zip(fs)
                    .map(|((u, v), f)| f.mul(u, v))
                    .collect(),
            ),
            (RingKind::Corner { ambient, .. }, _, _) => ambient.mul(a, b),
            _ => panic!("element shape does not match ring"),
        }
    }

    /// Product of a sequence of elements, left to right.
    pub fn mul_all(&self, factors: &[&Elem]) -> Elem {
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// The integer multiple `k * a`.
    pub fn scale(&self, a: &Elem, k: &BigInt) -> Elem {
        match (&self.kind, a) {
            (RingKind::ZMod { m }, Elem::Res(x)) => {
                let km = k.mod_floor_u64(*m);
                Elem::Res(((km as u128 * *x as u128) % *m as u128) as u64)
            }
            (RingKind::Integers, Elem::Int(x)) => Elem::Int(k * x),
            (RingKind::Matrix { base, .. } | RingKind::Triangular { base, .. }, Elem::Mat(x)) => {
                Elem::Mat(x.iter().map(|u| base.scale(u, k)).collect())
            }
            (RingKind::Product(fs), Elem::Tup(x)) => {
                Elem::Tup(x.iter().zip(fs).map(|(u, f)| f.scale(u, k)).collect())
            }
            (RingKind::Corner { ambient, .. }, _) => ambient.scale(a, k),
            _ => panic!("element shape does not match ring"),
        }
    }

    pub fn is_idempotent(&self, e: &Elem) -> bool {
        &self.mul(e, e) == e
    }

    /// Whether `a` is a well-formed canonical payload of this ring.
    pub fn contains(&self, a: &Elem) -> bool {
        match (&self.kind, a) {
            (RingKind::ZMod { m }, Elem::Res(x)) => x < m,
            (RingKind::Integers, Elem::Int(_)) => true,
            (RingKind::Matrix { base, n }, Elem::Mat(x)) => {
                x.len() == n * n && x.iter().all(|u| base.contains(u))
            }
            (RingKind::Triangular { base, n }, Elem::Mat(x)) => {
                x.len() == n * n
                    && x.iter().all(|u| base.contains(u))
                    && (0..*n).all(|i| (0..i).all(|j| base.is_zero(&x[i * n + j])))
            }
            (RingKind::Product(fs), Elem::Tup(x)) => {
                x.len() == fs.len() && x.iter().zip(fs).all(|(u, f)| f.contains(u))
            }
            (RingKind::Corner { ambient, p }, _) => {
                ambient.contains(a) && &ambient.mul(&ambient.mul(p, a), p) == a
            }
            _ => false,
        }
    }

    pub fn ensure_member(&self, a: &Elem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::NotAMember(self.show(a)))
        }
    }

    /// Additive generators: the ring is their `Z`-span.
    pub fn additive_generators(&self) -> Vec<Elem> {
        match &self.kind {
            RingKind::ZMod { .. } => vec![Elem::Res(1)],
            RingKind::Integers => vec![Elem::int(1)],
            RingKind::Matrix { base, n } => {
                let bg = base.additive_generators();
                let mut out = Vec::new();
                for pos in 0..n * n {
                    for g in &bg {
                        let mut v = vec![base.zero(); n * n];
                        v[pos] = g.clone();
                        out.push(Elem::Mat(v));
                    }
                }
                out
            }
            RingKind::Triangular { base, n } => {
                let bg = base.additive_generators();
                let mut out = Vec::new();
                for i in 0..*n {
                    for j in i..*n {
                        for g in &bg {
                            let mut v = vec![base.zero(); n * n];
                            v[i * n + j] = g.clone();
                            out.push(Elem::Mat(v));
                        }
                    }
                }
                out
            }
            RingKind::Product(fs) => {
                let mut out = Vec::new();
                for (slot, f) in fs.iter().enumerate() {
                    for g in f.additive_generators() {
                        let mut v: Vec<Elem> = fs.iter().map(|h| h.zero()).collect();
                        v[slot] = g;
                        out.push(Elem::Tup(v));
                    }
                }
                out
            }
            RingKind::Corner { ambient, p } => corner_generators(ambient, p, p),
        }
    }

    /// Additive coordinates (finite rings only).
    pub fn coords(&self, a: &Elem) -> Vec<u64> {
        let mut out = Vec::new();
        self.push_coords(a, &mut out);
        out
    }

    fn push_coords(&self, a: &Elem, out: &mut Vec<u64>) {
        match (&self.kind, a) {
            (RingKind::ZMod { .. }, Elem::Res(x)) => out.push(*x),
            (RingKind::Matrix { base, .. }, Elem::Mat(x)) => {
                for u in x {
                    base.push_coords(u, out);
                }
            }
            (RingKind::Triangular { base, n }, Elem::Mat(x)) => {
                for i in 0..*n {
                    for j in i..*n {
                        base.push_coords(&x[i * n + j], out);
                    }
                }
            }
            (RingKind::Product(fs), Elem::Tup(x)) => {
                for (u, f) in x.iter().zip(fs) {
                    f.push_coords(u, out);
                }
            }
            (RingKind::Corner { ambient, .. }, _) => ambient.push_coords(a, out),
            _ => panic!("coordinates requested for an infinite ring or mismatched element"),
        }
    }

    /// Inverse of [`Ring::coords`]. For corners this is the ambient element
    /// with those coordinates; callers only pass coordinates of members.
    pub fn from_coords(&self, c: &[u64]) -> Elem {
        let mut pos = 0;
        let e = self.take_coords(c, &mut pos);
        debug_assert_eq!(pos, c.len());
        e
    }

    fn take_coords(&self, c: &[u64], pos: &mut usize) -> Elem {
        match &self.kind {
            RingKind::ZMod { .. } => {
                let v = c[*pos];
                *pos += 1;
                Elem::Res(v)
            }
            RingKind::Matrix { base, n } => {
                Elem::Mat((0..n * n).map(|_| base.take_coords(c, pos)).collect())
            }
            RingKind::Triangular { base, n } => {
                let mut v = vec![base.zero(); n * n];
                for i in 0..*n {
                    for j in i..*n {
                        v[i * n + j] = base.take_coords(c, pos);
                    }
                }
                Elem::Mat(v)
            }
            RingKind::Product(fs) => Elem::Tup(fs.iter().map(|f| f.take_coords(c, pos)).collect()),
            RingKind::Corner { ambient, .. } => ambient.take_coords(c, pos),
            RingKind::Integers => panic!("integers have no finite coordinates"),
        }
    }

    /// Whether the coordinate box is exactly the ring (no corner anywhere).
    fn is_box(&self) -> bool {
        match &self.kind {
            RingKind::ZMod { .. } => true,
            RingKind::Integers => false,
            RingKind::Matrix { base, .. } | RingKind::Triangular { base, .. } => base.is_box(),
            RingKind::Product(fs) => fs.iter().all(|f| f.is_box()),
            RingKind::Corner { .. } => false,
        }
    }

    /// The additive span of `gens` inside this ring's coordinate group.
    pub fn span(&self, gens: &[Elem], track: bool) -> Subgroup {
        let moduli = self.moduli.as_ref().expect("span of an infinite ring");
        let coords: Vec<Vec<u64>> = gens.iter().map(|g| self.coords(g)).collect();
        Subgroup::generated_by(moduli, &coords, track)
    }

    /// Elements of an additive subgroup, in coordinate order.
    pub fn subgroup_elements(&self, s: &Subgroup) -> Vec<Elem> {
        s.elements().iter().map(|c| self.from_coords(c)).collect()
    }

    /// The deterministic element enumeration (coordinate order). Cached for
    /// small rings; built on demand up to `cap` otherwise.
    pub fn enumerate(&self, cap: u64) -> Result<Arc<Enumeration>> {
        if let Some(e) = &self.enumeration {
            return Ok(e.clone());
        }
        match &self.cardinality {
            Cardinality::Infinite => Err(Error::Unsupported(
                "enumeration unsupported for infinite rings".into(),
            )),
            Cardinality::Finite(n) => {
                if n > &BigUint::from(cap) {
                    Err(Error::CapExceeded {
                        cardinality: n.to_string(),
                        cap,
                    })
                } else {
                    Ok(Arc::new(Enumeration::build(self, false)))
                }
            }
        }
    }

    pub(crate) fn element_list(&self) -> Vec<Elem> {
        if self.is_box() {
            let moduli = self.moduli.as_ref().unwrap();
            let total: u64 = moduli.iter().product();
            let mut out = Vec::with_capacity(total as usize);
            let mut c = vec![0u64; moduli.len()];
            for _ in 0..total {
                out.push(self.from_coords(&c));
                for k in (0..c.len()).rev() {
                    c[k] += 1;
                    if c[k] < moduli[k] {
                        break;
                    }
                    c[k] = 0;
                }
            }
            out
        } else {
            let s = self.span(&self.additive_generators(), false);
            self.subgroup_elements(&s)
        }
    }

    /// Compact literal rendering, for messages and traces.
    pub fn show(&self, a: &Elem) -> String {
        literal::to_literal(a).to_string()
    }
}

/// Additive generators of the skew corner `pAq` of `ambient`.
pub(crate) fn corner_generators(ambient: &Ring, p: &Elem, q: &Elem) -> Vec<Elem> {
    let mut gens: Vec<Elem> = ambient
        .additive_generators()
        .iter()
        .map(|g| ambient.mul(&ambient.mul(p, g), q))
        .filter(|g| !ambient.is_zero(g))
        .collect();
    gens.sort();
    gens.dedup();
    gens
}

fn has_nonzero_integer_leaf(e: &Elem) -> bool {
    match e {
        Elem::Int(v) => !v.is_zero(),
        Elem::Res(_) => false,
        Elem::Mat(v) | Elem::Tup(v) => v.iter().any(has_nonzero_integer_leaf),
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        let mb = BigInt::from(m);
        let mut r = self % &mb;
        if r.is_negative() {
            r += &mb;
        }
        r.to_u64().unwrap()
    }
}
