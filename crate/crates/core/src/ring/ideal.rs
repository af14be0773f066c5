//! Right-ideal membership with explicit combinations.
//!
//! Finite rings: the right ideal `sum g_i A` is the additive span of the
//! products `g_i h` over additive generators `h` of `A`; membership is
//! decided in Hermite form and the tracked combination gives the witness.
//! Integers and matrix rings over them: a linear system over `Z`, decided
//! by Smith normal form.

use num_bigint::BigInt;

use super::snf::{solve_right, IntMatrix};
use super::{Elem, Ring, RingKind};
use crate::error::{Error, Result};

/// Size `s` such that elements are `s x s` integer matrices (integers: 1).
pub(crate) fn integer_block_size(ring: &Ring) -> Option<usize> {
    match ring.kind() {
        RingKind::Integers => Some(1),
        RingKind::Matrix { base, n } => integer_block_size(base).map(|s| s * n),
        _ => None,
    }
}

/// Writes `e` into `out` at block offset `(r0, c0)`.
fn flatten_into(ring: &Ring, e: &Elem, out: &mut IntMatrix, r0: usize, c0: usize) {
    match (ring.kind(), e) {
        (RingKind::Integers, Elem::Int(v)) => out[(r0, c0)] = v.clone(),
        (RingKind::Matrix { base, n }, Elem::Mat(x)) => {
            let s = integer_block_size(base).unwrap();
            for i in 0..*n {
                for j in 0..*n {
                    flatten_into(base, &x[i * n + j], out, r0 + i * s, c0 + j * s);
                }
            }
        }
        _ => panic!("not an integer matrix ring element"),
    }
}

pub(crate) fn flatten(ring: &Ring, e: &Elem) -> IntMatrix {
    let s = integer_block_size(ring).expect("not an integer matrix ring");
    let mut m = IntMatrix::zeros(s, s);
    flatten_into(ring, e, &mut m, 0, 0);
    m
}

fn unflatten_at(ring: &Ring, m: &IntMatrix, r0: usize, c0: usize) -> Elem {
    match ring.kind() {
        RingKind::Integers => Elem::Int(m[(r0, c0)].clone()),
        RingKind::Matrix { base, n } => {
            let s = integer_block_size(base).unwrap();
            let mut v = Vec::with_capacity(n * n);
            for i in 0..*n {
                for j in 0..*n {
                    v.push(unflatten_at(base, m, r0 + i * s, c0 + j * s));
                }
            }
            Elem::Mat(v)
        }
        _ => panic!("not an integer matrix ring"),
    }
}

fn check_members(ring: &Ring, gens: &[Elem], target: &Elem) -> Result<()> {
    for g in gens.iter().chain(std::iter::once(target)) {
        ring.ensure_member(g)?;
    }
    Ok(())
}

/// `x_1..x_k` with `sum g_i x_i = target`, or `None` if `target` is not in
/// the right ideal generated by `gens`.
pub fn solve_right_combination(ring: &Ring, gens: &[Elem], target: &Elem) -> Result<Option<Vec<Elem>>> {
    check_members(ring, gens, target)?;
    if gens.is_empty() {
        return Ok(if ring.is_zero(target) { Some(vec![]) } else { None });
    }
    if ring.is_finite() {
        let hs = ring.additive_generators();
        let mut products = Vec::with_capacity(gens.len() * hs.len());
        for g in gens {
            for h in &hs {
                products.push(ring.mul(g, h));
            }
        }
        let span = ring.span(&products, true);
        let Some(coeffs) = span.express(&ring.coords(target)) else {
            return Ok(None);
        };
        let xs = gens
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let mut x = ring.zero();
                for (j, h) in hs.iter().enumerate() {
                    let c = coeffs[i * hs.len() + j];
                    if c != 0 {
                        x = ring.add(&x, &ring.scale(h, &BigInt::from(c)));
                    }
                }
                x
            })
            .collect();
        return Ok(Some(xs));
    }
    if let Some(s) = integer_block_size(ring) {
        let k = gens.len();
        let mut stacked = IntMatrix::zeros(s, s * k);
        for (i, g) in gens.iter().enumerate() {
            flatten_into(ring, g, &mut stacked, 0, i * s);
        }
        let t = flatten(ring, target);
        return Ok(solve_right(&stacked, &t)
            .map(|x| (0..k).map(|i| unflatten_at(ring, &x, i * s, 0)).collect()));
    }
    Err(Error::Unsupported(format!(
        "no right-ideal decision procedure for {}",
        serde_json::to_string(&ring.spec()).unwrap_or_default()
    )))
}

/// Whether `target` lies in `sum g_i A`.
pub fn right_ideal_contains(ring: &Ring, gens: &[Elem], target: &Elem) -> Result<bool> {
    if ring.is_finite() && !gens.is_empty() {
        check_members(ring, gens, target)?;
        let hs = ring.additive_generators();
        let products: Vec<Elem> = gens
            .iter()
            .flat_map(|g| hs.iter().map(move |h| ring.mul(g, h)))
            .collect();
        return Ok(ring.span(&products, false).contains(&ring.coords(target)));
    }
    Ok(solve_right_combination(ring, gens, target)?.is_some())
}

/// `x_1..x_k` with `sum g_i x_i = 1`, if the generators are right unimodular.
pub fn solve_right_inverse(ring: &Ring, gens: &[Elem]) -> Result<Option<Vec<Elem>>> {
    solve_right_combination(ring, gens, &ring.one())
}

/// Whether `target` lies in the two-sided ideal generated by `g` (finite rings).
pub fn two_sided_ideal_contains(ring: &Ring, g: &Elem, target: &Elem) -> Result<bool> {
    if !ring.is_finite() {
        return Err(Error::Unsupported(
            "two-sided ideal closure needs a finite ring".into(),
        ));
    }
    ring.ensure_member(g)?;
    ring.ensure_member(target)?;
    let hs = ring.additive_generators();
    let mut products = Vec::with_capacity(hs.len() * hs.len());
    for a in &hs {
        let ag = ring.mul(a, g);
        for b in &hs {
            products.push(ring.mul(&ag, b));
        }
    }
    Ok(ring.span(&products, false).contains(&ring.coords(target)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DEFAULT_ENUMERATION_CAP;

    fn check_combination(ring: &Ring, gens: &[Elem], xs: &[Elem]) {
        let mut sum = ring.zero();
        for (g, x) in gens.iter().zip(xs) {
            sum = ring.add(&sum, &ring.mul(g, x));
        }
        assert_eq!(sum, ring.one());
    }

    #[test]
    fn integers() {
        let z = Ring::integers();
        let gens = [Elem::int(3), Elem::int(5)];
        assert!(right_ideal_contains(&z, &gens, &z.one()).unwrap());
        let xs = solve_right_inverse(&z, &gens).unwrap().unwrap();
        check_combination(&z, &gens, &xs);
        assert!(!right_ideal_contains(&z, &[Elem::int(2), Elem::int(4)], &z.one()).unwrap());
        assert!(right_ideal_contains(&z, &[Elem::int(2), Elem::int(4)], &Elem::int(6)).unwrap());
    }

    #[test]
    fn zmod4() {
        let r = Ring::zmod(4).unwrap();
        let gens = [Elem::Res(2), Elem::Res(3)];
        assert!(right_ideal_contains(&r, &gens, &r.one()).unwrap());
        let xs = solve_right_inverse(&r, &gens).unwrap().unwrap();
        check_combination(&r, &gens, &xs);
        assert!(!right_ideal_contains(&r, &[Elem::Res(2)], &r.one()).unwrap());
    }

    #[test]
    fn unit_generator_everywhere() {
        let r = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let xs = solve_right_inverse(&r, &[r.one()]).unwrap().unwrap();
        assert_eq!(xs, vec![r.one()]);
    }

    #[test]
    fn matrix_units_in_m2() {
        let r = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let e11 = Elem::Mat(vec![Elem::Res(1), Elem::Res(0), Elem::Res(0), Elem::Res(0)]);
        let e22 = Elem::Mat(vec![Elem::Res(0), Elem::Res(0), Elem::Res(0), Elem::Res(1)]);
        let gens = [e11.clone(), e22.clone()];
        let xs = solve_right_inverse(&r, &gens).unwrap().unwrap();
        check_combination(&r, &gens, &xs);
        assert!(!right_ideal_contains(&r, &[e11], &r.one()).unwrap());
    }

    #[test]
    fn m2z_identity_blocks() {
        let r = Ring::matrix(&Ring::integers(), 2).unwrap();
        let e11 = r.parse(&serde_json::json!([[1, 0], [0, 0]])).unwrap();
        let e22 = r.parse(&serde_json::json!([[0, 0], [0, 1]])).unwrap();
        let xs = solve_right_inverse(&r, &[e11.clone(), e22.clone()]).unwrap().unwrap();
        check_combination(&r, &[e11, e22], &xs);
        let two = r.scale(&r.one(), &BigInt::from(2));
        assert!(solve_right_inverse(&r, &[two]).unwrap().is_none());
    }

    #[test]
    fn contains_agrees_with_solve_exhaustively() {
        let rings = vec![
            Ring::zmod(4).unwrap(),
            Ring::product(&[Ring::zmod(2).unwrap(), Ring::zmod(3).unwrap()]).unwrap(),
            Ring::triangular(&Ring::zmod(2).unwrap(), 2).unwrap(),
            Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap(),
        ];
        for r in rings {
            let en = r.enumerate(DEFAULT_ENUMERATION_CAP).unwrap();
            for a in en.elements() {
                for b in en.elements() {
                    let gens = [a.clone(), b.clone()];
                    let c = right_ideal_contains(&r, &gens, &r.one()).unwrap();
                    let s = solve_right_inverse(&r, &gens).unwrap();
                    assert_eq!(c, s.is_some());
                    if let Some(xs) = s {
                        check_combination(&r, &gens, &xs);
                    }
                    // brute force: exists x, y with a x + b y = 1
                    let brute = en.elements().iter().any(|x| {
                        en.elements()
                            .iter()
                            .any(|y| r.add(&r.mul(a, x), &r.mul(b, y)) == r.one())
                    });
                    assert_eq!(c, brute);
                }
            }
        }
    }

    #[test]
    fn unsupported_owner() {
        let z = Ring::integers();
        let p = Ring::product(&[z.clone(), z]).unwrap();
        let one = p.one();
        assert!(matches!(
            solve_right_inverse(&p, &[one]),
            Err(Error::Unsupported(_))
        ));
    }
}
