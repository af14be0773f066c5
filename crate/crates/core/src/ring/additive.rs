//! Additive subgroups of a finite coordinate group `Z/m_1 x ... x Z/m_d`.
//!
//! Every finite ring in this crate has such a coordinate group as its additive
//! group. A subgroup is kept in Hermite form: one row per coordinate, the row
//! for coordinate `k` has its pivot at `k` and zeros to the left, and the
//! pivot divides `m_k`. Rows optionally carry the integer combination of the
//! inserted generators that produced them, which turns membership tests into
//! explicit witnesses.

use num_bigint::BigUint;

#[derive(Debug, Clone)]
struct HermiteRow {
    v: Vec<i128>,
    c: Vec<i128>,
}

/// A subgroup of a finite coordinate group, in Hermite form.
#[derive(Debug, Clone)]
pub struct Subgroup {
    moduli: Vec<i128>,
    rows: Vec<HermiteRow>,
    ngens: usize,
    exponent: i128,
    inserted: usize,
}

pub(crate) fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    egcd(a, b).0
}

impl Subgroup {
    /// The zero subgroup. `ngens` is the number of generator slots whose
    /// combinations are tracked (0 disables tracking).
    pub fn new(moduli: &[u64], ngens: usize) -> Self {
        let moduli: Vec<i128> = moduli.iter().map(|&m| m as i128).collect();
        let d = moduli.len();
        let exponent = moduli.iter().fold(1i128, |acc, &m| acc / gcd(acc, m) * m);
        let rows = (0..d)
            .map(|k| {
                let mut v = vec![0i128; d];
                v[k] = moduli[k];
                HermiteRow {
                    v,
                    c: vec![0; ngens],
                }
            })
            .collect();
        Subgroup {
            moduli,
            rows,
            ngens,
            exponent,
            inserted: 0,
        }
    }

    /// The subgroup generated by `gens`, tracking combinations when `track`.
    pub fn generated_by(moduli: &[u64], gens: &[Vec<u64>], track: bool) -> Self {
        let mut s = Subgroup::new(moduli, if track { gens.len() } else { 0 });
        for g in gens {
            s.insert(g);
        }
        s
    }

    pub fn dimension(&self) -> usize {
        self.moduli.len()
    }

    /// Adds the next generator. With tracking on, it occupies the next slot.
    pub fn insert(&mut self, g: &[u64]) {
        let v: Vec<i128> = g.iter().map(|&x| x as i128).collect();
        let mut c = vec![0i128; self.ngens];
        if self.ngens > 0 {
            assert!(self.inserted < self.ngens, "more generators than tracked slots");
            c[self.inserted] = 1;
        }
        self.inserted += 1;
        self.insert_row(v, c);
    }

    /// Joins another subgroup of the same group (combinations are dropped).
    pub fn join(&mut self, other: &Subgroup) {
        for row in &other.rows {
            let c = vec![0i128; self.ngens];
            self.insert_row(row.v.clone(), c);
        }
    }

    fn reduce_coeffs(&self, c: &mut [i128]) {
        for x in c.iter_mut() {
            *x = x.rem_euclid(self.exponent);
        }
    }

    fn insert_row(&mut self, mut v: Vec<i128>, mut c: Vec<i128>) {
        let d = self.moduli.len();
        for (j, x) in v.iter_mut().enumerate() {
            *x = x.rem_euclid(self.moduli[j]);
        }
        for k in 0..d {
            if v[k] == 0 {
                continue;
            }
            let (g, s, t) = egcd(self.rows[k].v[k], v[k]);
            let rk = self.rows[k].v[k] / g;
            let vk = v[k] / g;
            {
                let row = &mut self.rows[k];
                for j in k..d {
                    let (a, b) = (row.v[j], v[j]);
                    row.v[j] = s * a + t * b;
                    v[j] = rk * b - vk * a;
                }
                for j in 0..c.len() {
                    let (a, b) = (row.c[j], c[j]);
                    row.c[j] = s * a + t * b;
                    c[j] = rk * b - vk * a;
                }
                for j in (k + 1)..d {
                    row.v[j] = row.v[j].rem_euclid(self.moduli[j]);
                }
            }
            let mut rc = std::mem::take(&mut self.rows[k].c);
            self.reduce_coeffs(&mut rc);
            self.rows[k].c = rc;
            debug_assert_eq!(self.rows[k].v[k], g);
            debug_assert_eq!(v[k], 0);
            for j in (k + 1)..d {
                v[j] = v[j].rem_euclid(self.moduli[j]);
            }
            self.reduce_coeffs(&mut c);
        }
    }

    /// Reduces `t` against the rows; returns the combination if it is a member.
    fn reduce(&self, t: &[u64]) -> Option<Vec<i128>> {
        let d = self.moduli.len();
        let mut t: Vec<i128> = t.iter().map(|&x| x as i128).collect();
        let mut acc = vec![0i128; self.ngens];
        for k in 0..d {
            t[k] = t[k].rem_euclid(self.moduli[k]);
            if t[k] == 0 {
                continue;
            }
            let pivot = self.rows[k].v[k];
            if t[k] % pivot != 0 {
                return None;
            }
            let q = t[k] / pivot;
            for j in k..d {
                t[j] = (t[j] - q * self.rows[k].v[j]).rem_euclid(self.moduli[j]);
            }
            for (j, a) in acc.iter_mut().enumerate() {
                *a = (*a + q * self.rows[k].c[j]).rem_euclid(self.exponent);
            }
        }
        Some(acc)
    }

    pub fn contains(&self, t: &[u64]) -> bool {
        self.reduce(t).is_some()
    }

    /// Coefficients `c_j` (as nonnegative integers) with `sum c_j g_j = t`,
    /// where `g_j` are the tracked generators in insertion order.
    pub fn express(&self, t: &[u64]) -> Option<Vec<u64>> {
        self.reduce(t)
            .map(|acc| acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn order(&self) -> BigUint {
        let mut n = BigUint::from(1u32);
        for (k, row) in self.rows.iter().enumerate() {
            n *= BigUint::from((self.moduli[k] / row.v[k]) as u128);
        }
        n
    }

    /// Whether the subgroup is the whole coordinate group.
    pub fn is_full(&self) -> bool {
        self.rows.iter().enumerate().all(|(k, r)| r.v[k] == 1)
    }

    /// A canonical description: the fully reduced Hermite rows.
    pub fn canonical_key(&self) -> Vec<u64> {
        let d = self.moduli.len();
        let mut rows: Vec<Vec<i128>> = self.rows.iter().map(|r| r.v.clone()).collect();
        for k in 0..d {
            let pivot = rows[k][k];
            for i in 0..k {
                let q = rows[i][k].div_euclid(pivot);
                if q != 0 {
                    for j in k..d {
                        rows[i][j] -= q * rows[k][j];
                    }
                }
            }
        }
        rows.into_iter()
            .flat_map(|r| r.into_iter().map(|x| x as u64))
            .collect()
    }

    /// All members, sorted lexicographically by coordinates.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let d = self.moduli.len();
        let ranges: Vec<i128> = (0..d).map(|k| self.moduli[k] / self.rows[k].v[k]).collect();
        let mut out = Vec::new();
        let mut counter = vec![0i128; d];
        loop {
            let mut v = vec![0i128; d];
            for k in 0..d {
                if counter[k] != 0 {
                    for j in k..d {
                        v[j] += counter[k] * self.rows[k].v[j];
                    }
                }
            }
            out.push(
                v.iter()
                    .enumerate()
                    .map(|(j, x)| x.rem_euclid(self.moduli[j]) as u64)
                    .collect(),
            );
            let mut k = d;
            loop {
                if k == 0 {
                    out.sort();
                    return out;
                }
                k -= 1;
                counter[k] += 1;
                if counter[k] < ranges[k] {
                    break;
                }
                counter[k] = 0;
            }
        }
    }
}
