//! Integer instances: a rank-2 reducer for `Z`, the irreducible pair that
//! keeps `sr(Z)` above 1, and unimodularity of rows over `M_2(Z)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::embed::matrix_unit;
use crate::ring::ideal::solve_right_inverse;
use crate::ring::snf::{smith_normal_form, IntMatrix};
use crate::ring::{Elem, Ring, RingKind, RingRef};
use crate::stablerank::{Reducer, Reduction};
use crate::trace::PipelineTrace;

/// Above this, factor-free peeling replaces trial division.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000_000_000;

/// Distinct prime factors by trial division.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut out = vec![];
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x` with `a x = 1 (mod m)`.
fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// `(c_1, c_2)` with `gcd(a_1 + b c_1, a_2 + b c_2) = 1`.
pub fn z_reducer(a1: &BigInt, a2: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt)> {
    if !a1.gcd(a2).gcd(b).is_one() {
        return Err(Error::GcdHypothesis);
    }
    if a1.gcd(a2).is_one() {
        return Ok((BigInt::zero(), BigInt::zero()));
    }
    // b != 0 here, otherwise gcd(a1, a2) = 1
    let c1 = if a1.is_zero() { BigInt::one() } else { BigInt::zero() };
    let a = (a1 + b * &c1).abs();
    let c2 = match a.to_u64().filter(|&v| v <= TRIAL_DIVISION_LIMIT) {
        Some(v) => {
            // a2 + b c2 = 1 mod every prime of a' that does not divide b
            let (mut res, mut modulus) = (BigInt::zero(), BigInt::one());
            for q in prime_factors(v) {
                let q = BigInt::from(q);
                if b.is_multiple_of(&q) {
                    continue;
                }
                let want = (BigInt::one() - a2) * inverse_mod(b, &q).unwrap();
                // res + modulus k = want (mod q)
                let k = ((want - &res) * inverse_mod(&modulus, &q).unwrap()).mod_floor(&q);
                res += &modulus * k;
                modulus *= q;
            }
            res
        }
        None => {
            // strip from a' every prime shared with b, then solve mod the rest
            let mut m = a.clone();
            loop {
                let g = m.gcd(b);
                if g.is_one() {
                    break;
                }
                m /= g;
            }
            if m.is_one() {
                BigInt::zero()
            } else {
                ((BigInt::one() - a2) * inverse_mod(b, &m).unwrap()).mod_floor(&m)
            }
        }
    };
    let (x, y) = (a1 + b * &c1, a2 + b * &c2);
    if !x.gcd(&y).is_one() {
        return Err(Error::Invariant("integer reduction is not coprime".into()));
    }
    Ok((c1, c2))
}

/// Rank-2 reducer for the integers, or for a corner `e_kk M_n(Z) e_kk`.
#[derive(Debug, Clone)]
pub struct ZReducer {
    ring: RingRef,
    slot: Option<(usize, RingRef)>,
}

impl ZReducer {
    pub fn integers() -> Self {
        ZReducer {
            ring: Ring::integers(),
            slot: None,
        }
    }

    /// For `B = corner(M_n(Z), e_kk)`.
    pub fn corner(b: &RingRef) -> Result<Self> {
        let RingKind::Corner { ambient, p } = b.kind() else {
            return Err(Error::Unsupported("expected a corner ring".into()));
        };
        let n = ambient.matrix_size().unwrap_or(0);
        let is_z = ambient.matrix_base().is_some_and(|r| matches!(r.kind(), RingKind::Integers));
        let k = (0..n).find(|&k| is_z && *p == matrix_unit(ambient, k, k, &Elem::int(1)));
        match k {
            Some(k) => Ok(ZReducer {
                ring: b.clone(),
                slot: Some((k, ambient.clone())),
            }),
            None => Err(Error::Unsupported(
                "integer reducer needs a diagonal matrix unit corner of M_n(Z)".into(),
            )),
        }
    }

    fn to_int(&self, e: &Elem) -> BigInt {
        match &self.slot {
            None => e.as_int().clone(),
            Some((k, amb)) => {
                let n = amb.matrix_size().unwrap();
                e.entries()[k * n + k].as_int().clone()
            }
        }
    }

    fn from_int(&self, v: BigInt) -> Elem {
        match &self.slot {
            None => Elem::Int(v),
            Some((k, amb)) => matrix_unit(amb, *k, *k, &Elem::Int(v)),
        }
    }
}

impl Reducer for ZReducer {
    fn ring(&self) -> &RingRef {
        &self.ring
    }

    fn rank(&self) -> usize {
        2
    }

    fn reduce_traced(&self, row: &[Elem], trace: &mut PipelineTrace) -> Result<Reduction> {
        let v: Vec<BigInt> = row.iter().map(|e| self.to_int(e)).collect();
        let (c1, c2) = z_reducer(&v[0], &v[1], &v[2]).map_err(|e| match e {
            Error::GcdHypothesis => Error::NotUnimodular,
            other => other,
        })?;
        let (x, y) = (&v[0] + &v[2] * &c1, &v[1] + &v[2] * &c2);
        let g = x.extended_gcd(&y);
        let sign = g.gcd.signum();
        trace.record("integer_reduction", || {
            vec![
                ("row", serde_json::json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
                ("c", serde_json::json!([c1.to_string(), c2.to_string()])),
            ]
        });
        Ok(Reduction {
            c: vec![self.from_int(c1), self.from_int(c2)],
            inverse: vec![self.from_int(g.x * &sign), self.from_int(g.y * sign)],
        })
    }
}

/// The unimodular pair `(5, 7)` over `Z` that no `c` reduces: `5 + 7c` is
/// `5 mod 7`, while the units `1` and `-1` are `1` and `6 mod 7`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerWitness {
    pub pair: (i64, i64),
    /// `3.5 - 2.7 = 1`.
    pub inverse: (i64, i64),
    pub residue: i64,
    pub unit_residues: Vec<i64>,
}

impl LowerWitness {
    pub fn is_unimodular(&self) -> bool {
        self.pair.0 * self.inverse.0 + self.pair.1 * self.inverse.1 == 1
    }

    /// The residue argument: `a + bc = a (mod b)` never hits a unit residue.
    pub fn residue_argument_holds(&self) -> bool {
        let (a, b) = self.pair;
        let units: Vec<i64> = [1i64, -1].iter().map(|u| u.rem_euclid(b)).collect();
        a.rem_euclid(b) == self.residue && units == self.unit_residues && !units.contains(&self.residue)
    }

    /// No `c` in `-bound..=bound` makes `a + bc` a unit.
    pub fn replay(&self, bound: i64) -> bool {
        let (a, b) = self.pair;
        (-bound..=bound).all(|c| (a + b * c).abs() != 1)
    }
}

pub fn z_sr_lower_witness() -> LowerWitness {
    LowerWitness {
        pair: (5, 7),
        inverse: (3, -2),
        residue: 5,
        unit_residues: vec![1, 6],
    }
}

/// Unimodularity of a row over `M_2(Z)` read off the Smith form of the
/// stacked `2 x 2k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct M2zCertificate {
    pub unimodular: bool,
    pub invariants: Vec<BigInt>,
    /// `x_i` with `sum a_i x_i = 1`.
    pub right_inverse: Option<Vec<Elem>>,
}

pub fn m2z_ring() -> RingRef {
    Ring::matrix(&Ring::integers(), 2).expect("size 2")
}

pub fn m2z_unimodular(row: &[Elem]) -> Result<M2zCertificate> {
    let m = m2z_ring();
    let mut stacked = IntMatrix::zeros(2, 2 * row.len());
    for (k, a) in row.iter().enumerate() {
        m.ensure_member(a)?;
        for i in 0..2 {
            for j in 0..2 {
                stacked[(i, 2 * k + j)] = a.entries()[2 * i + j].as_int().clone();
            }
        }
    }
    let invariants = smith_normal_form(&stacked).invariants();
    let unimodular = invariants.len() == 2 && invariants.iter().all(|d| d.is_one());
    let right_inverse = if unimodular {
        let xs = solve_right_inverse(&m, row)?
            .ok_or_else(|| Error::Invariant("unit invariants but no right inverse".into()))?;
        let sum = row.iter().zip(&xs).fold(m.zero(), |acc, (a, x)| m.add(&acc, &m.mul(a, x)));
        if sum != m.one() {
            return Err(Error::Invariant("right inverse does not verify".into()));
        }
        Some(xs)
    } else {
        None
    };
    Ok(M2zCertificate {
        unimodular,
        invariants,
        right_inverse,
    })
}

/// A 2 x 2 integer matrix from rows.
pub fn m2z(rows: [[i64; 2]; 2]) -> Elem {
    Elem::Mat(rows.iter().flatten().map(|&v| Elem::int(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stablerank::verify_reduction;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn reduces(a1: i64, a2: i64, b: i64) -> (BigInt, BigInt) {
        let (c1, c2) = z_reducer(&bi(a1), &bi(a2), &bi(b)).unwrap();
        assert!((bi(a1) + bi(b) * &c1).gcd(&(bi(a2) + bi(b) * &c2)).is_one());
        (c1, c2)
    }

    #[test]
    fn examples() {
        assert_eq!(reduces(1, 0, 5), (bi(0), bi(0)));
        assert_eq!(reduces(5, 7, 0), (bi(0), bi(0)));
        reduces(2, 4, 3);
        reduces(0, 0, 1);
        reduces(0, 6, 5);
        reduces(-6, 10, 15);
        assert_eq!(z_reducer(&bi(2), &bi(4), &bi(6)), Err(Error::GcdHypothesis));
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }

    #[test]
    fn random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut done = 0;
        while done < 10_000 {
            let v: Vec<i64> = (0..3).map(|_| rng.gen_range(-1_000_000..=1_000_000)).collect();
            if !bi(v[0]).gcd(&bi(v[1])).gcd(&bi(v[2])).is_one() {
                continue;
            }
            reduces(v[0], v[1], v[2]);
            done += 1;
        }
    }

    #[test]
    fn large_values_use_peeling() {
        let a1 = BigInt::from(2u64) * BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let a2 = BigInt::from(1_000_000_007u64) * bi(6);
        let b = bi(35);
        let (c1, c2) = z_reducer(&a1, &a2, &b).unwrap();
        assert!((&a1 + &b * c1).gcd(&(&a2 + &b * c2)).is_one());
    }

    #[test]
    fn reducer_on_integers_and_corner() {
        let z = ZReducer::integers();
        let row = [Elem::int(2), Elem::int(4), Elem::int(3)];
        let r = z.reduce(&row).unwrap();
        assert!(verify_reduction(z.ring(), &row, &r));
        assert_eq!(z.reduce(&[Elem::int(2), Elem::int(4), Elem::int(6)]), Err(Error::NotUnimodular));

        let m = m2z_ring();
        let e11 = matrix_unit(&m, 0, 0, &Elem::int(1));
        let b = Ring::corner(&m, &e11).unwrap();
        let zc = ZReducer::corner(&b).unwrap();
        let row: Vec<Elem> = [6, 10, 15].iter().map(|&v| matrix_unit(&m, 0, 0, &Elem::int(v))).collect();
        let r = zc.reduce(&row).unwrap();
        assert!(verify_reduction(&b, &row, &r));
        assert!(ZReducer::corner(&Ring::corner(&m, &m.one()).unwrap()).is_err());
    }

    #[test]
    fn lower_witness() {
        let w = z_sr_lower_witness();
        assert_eq!(w.pair, (5, 7));
        assert!(w.is_unimodular());
        assert!(w.residue_argument_holds());
        assert!(w.replay(1_000_000));
    }

    #[test]
    fn m2z_rows() {
        let id = m2z([[1, 0], [0, 1]]);
        assert!(m2z_unimodular(&[id]).unwrap().unimodular);
        let two = m2z([[2, 0], [0, 2]]);
        let c = m2z_unimodular(&[two]).unwrap();
        assert!(!c.unimodular);
        assert_eq!(c.invariants, vec![bi(2), bi(2)]);
        let (e11, e22) = (m2z([[1, 0], [0, 0]]), m2z([[0, 0], [0, 1]]));
        let c = m2z_unimodular(&[e11.clone(), e22.clone()]).unwrap();
        assert!(c.unimodular);
        let xs = c.right_inverse.unwrap();
        let m = m2z_ring();
        assert_eq!(m.add(&m.mul(&e11, &xs[0]), &m.mul(&e22, &xs[1])), m.one());
    }

    #[test]
    fn full_corner_pipeline_on_m2z() {
        use crate::idempotent::FullnessCertificate;
        use crate::transforms::{reducer_from_full_corner, CornerSource};
        use std::sync::Arc;
        let m = m2z_ring();
        let u = |i, j| matrix_unit(&m, i, j, &Elem::int(1));
        let p = u(0, 0);
        let cert = FullnessCertificate::from_pairs(&m, &p, &[(u(0, 0), u(0, 0)), (u(1, 0), u(0, 1))]).unwrap();
        let b = Ring::corner(&m, &p).unwrap();
        let red = Arc::new(ZReducer::corner(&b).unwrap());
        let full = reducer_from_full_corner(&m, &p, CornerSource::Reducer(red), &cert).unwrap();
        assert_eq!(full.plan().size, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut done = 0;
        while done < 20 {
            let row: Vec<Elem> = (0..3)
                .map(|_| m2z([[0, 0], [0, 0]].map(|r: [i64; 2]| r.map(|_| rng.gen_range(-50..=50)))))
                .collect();
            if !m2z_unimodular(&row).unwrap().unimodular {
                continue;
            }
            let t0 = std::time::Instant::now();
            let r = full.reduce(&row).unwrap();
            assert!(t0.elapsed().as_secs_f64() < 2.0);
            let reduced = crate::stablerank::reduced_row(&m, &row, &r.c);
            assert!(m2z_unimodular(&reduced).unwrap().unimodular);
            done += 1;
        }
    }
}
