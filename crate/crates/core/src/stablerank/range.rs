//! Exhaustive stable range checks on finite rings.
//!
//! Right unimodularity only depends on the right ideals generated by the
//! entries, and reducibility of `(a_1, ..., a_n, b)` only on the `a_i` and
//! the ideal `bA`. Every element gets the id of its principal right ideal;
//! sums of ideals are joined lazily in Hermite form.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::{Reducer, Reduction};
use crate::error::{Error, Result};
use crate::ring::additive::Subgroup;
use crate::ring::{Elem, Enumeration, RingRef, DEFAULT_ENUMERATION_CAP};
use crate::trace::PipelineTrace;

const CHUNK: usize = 4096;

#[derive(Debug)]
struct Lattice {
    ideals: Vec<Subgroup>,
    keys: HashMap<Vec<u64>, u32>,
    full: Vec<bool>,
    joins: HashMap<(u32, u32), u32>,
    members: HashMap<u32, Arc<Vec<u32>>>,
    one: Vec<u64>,
}

impl Lattice {
    fn intern(&mut self, s: Subgroup, key: Vec<u64>) -> u32 {
        if let Some(&id) = self.keys.get(&key) {
            return id;
        }
        let id = self.ideals.len() as u32;
        self.full.push(s.contains(&self.one));
        self.ideals.push(s);
        self.keys.insert(key, id);
        id
    }

    fn join(&mut self, a: u32, b: u32) -> u32 {
        if a == b {
            return a;
        }
        let k = (a.min(b), a.max(b));
        if let Some(&j) = self.joins.get(&k) {
            return j;
        }
        let j = if self.full[a as usize] {
            a
        } else if self.full[b as usize] {
            b
        } else {
            let mut s = self.ideals[a as usize].clone();
            s.join(&self.ideals[b as usize]);
            let key = s.canonical_key();
            self.intern(s, key)
        };
        self.joins.insert(k, j);
        j
    }
}

/// Principal right ideals of every element of a finite ring.
#[derive(Debug)]
pub struct RangeIndex {
    ring: RingRef,
    en: Arc<Enumeration>,
    moduli: Vec<u64>,
    coords: Vec<Vec<u64>>,
    boxed: bool,
    by_coords: HashMap<Vec<u64>, u32>,
    principal: Vec<u32>,
    zero_ideal: u32,
    lattice: Mutex<Lattice>,
}

impl RangeIndex {
    pub fn build(ring: &RingRef) -> Result<Self> {
        if !ring.is_finite() {
            return Err(Error::Unsupported(
                "enumeration unsupported for infinite rings".into(),
            ));
        }
        let en = ring.enumerate(DEFAULT_ENUMERATION_CAP)?;
        let moduli = ring.moduli().expect("finite ring has moduli").to_vec();
        let gens = ring.additive_generators();
        let coords: Vec<Vec<u64>> = en.elements().par_iter().map(|e| ring.coords(e)).collect();
        let total: u64 = moduli.iter().product();
        let boxed = total as usize == en.len()
            && coords
                .iter()
                .enumerate()
                .all(|(i, c)| mixed_radix(&moduli, c) == i);
        let by_coords = if boxed {
            HashMap::new()
        } else {
            coords
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), i as u32))
                .collect()
        };
        let mut lattice = Lattice {
            ideals: Vec::new(),
            keys: HashMap::new(),
            full: Vec::new(),
            joins: HashMap::new(),
            members: HashMap::new(),
            one: ring.coords(&ring.one()),
        };
        let zero_ideal = {
            let s = ring.span(&[], false);
            let k = s.canonical_key();
            lattice.intern(s, k)
        };
        let mut principal = Vec::with_capacity(en.len());
        for chunk in en.elements().chunks(CHUNK) {
            let keys: Vec<Vec<u64>> = chunk
                .par_iter()
                .map(|e| principal_ideal(ring, &gens, e).canonical_key())
                .collect();
            for (e, key) in chunk.iter().zip(keys) {
                let id = match lattice.keys.get(&key) {
                    Some(&id) => id,
                    None => lattice.intern(principal_ideal(ring, &gens, e), key),
                };
                principal.push(id);
            }
        }
        Ok(RangeIndex {
            ring: ring.clone(),
            en,
            moduli,
            coords,
            boxed,
            by_coords,
            principal,
            zero_ideal,
            lattice: Mutex::new(lattice),
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.en.len()
    }

    pub fn is_empty(&self) -> bool {
        self.en.is_empty()
    }

    pub fn element(&self, i: usize) -> &Elem {
        self.en.get(i)
    }

    pub fn indices_of(&self, row: &[Elem]) -> Result<Vec<usize>> {
        row.iter()
            .map(|e| {
                self.en
                    .index_of(e)
                    .ok_or_else(|| Error::NotAMember(self.ring.show(e)))
            })
            .collect()
    }

    /// Number of distinct principal right ideals.
    pub fn principal_ideal_count(&self) -> usize {
        let mut ids = self.principal.clone();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    pub fn is_unit(&self, i: usize) -> bool {
        self.lattice.lock().unwrap().full[self.principal[i] as usize]
    }

    fn index_of_coords(&self, c: &[u64]) -> usize {
        if self.boxed {
            mixed_radix(&self.moduli, c)
        } else {
            self.by_coords[c] as usize
        }
    }

    fn add(&self, i: usize, j: usize) -> usize {
        let (x, y) = (&self.coords[i], &self.coords[j]);
        if self.boxed {
            return x
                .iter()
                .zip(y)
                .zip(&self.moduli)
                .fold(0usize, |acc, ((a, b), m)| acc * (*m as usize) + ((a + b) % m) as usize);
        }
        let c: Vec<u64> = x.iter().zip(y).zip(&self.moduli).map(|((a, b), m)| (a + b) % m).collect();
        self.index_of_coords(&c)
    }

    fn members(&self, lat: &mut Lattice, id: u32) -> Arc<Vec<u32>> {
        if let Some(m) = lat.members.get(&id) {
            return m.clone();
        }
        let m: Vec<u32> = lat.ideals[id as usize]
            .elements()
            .iter()
            .map(|c| self.index_of_coords(c) as u32)
            .collect();
        let m = Arc::new(m);
        lat.members.insert(id, m.clone());
        m
    }

    fn join_all(&self, lat: &mut Lattice, ids: impl IntoIterator<Item = usize>) -> u32 {
        ids.into_iter()
            .fold(self.zero_ideal, |acc, i| lat.join(acc, self.principal[i]))
    }

    /// Whether the row (all entries, including `b`) is right unimodular.
    pub fn is_unimodular(&self, row: &[usize]) -> bool {
        let mut lat = self.lattice.lock().unwrap();
        let j = self.join_all(&mut lat, row.iter().copied());
        lat.full[j as usize]
    }

    /// First `c` (lexicographic in enumeration order) reducing the row.
    pub fn first_reduction(&self, row: &[usize]) -> Option<Vec<usize>> {
        let (&b, a) = row.split_last()?;
        let mut lat = self.lattice.lock().unwrap();
        let bb = self.element(b).clone();
        // candidate[k][c] = index of a_k + b c
        let bc: Vec<usize> = self
            .en
            .elements()
            .iter()
            .map(|c| self.en.index_of(&self.ring.mul(&bb, c)).unwrap())
            .collect();
        let cand = |k: usize, ci: usize| self.add(a[k], bc[ci]);
        let mut out = Vec::with_capacity(a.len());
        if dfs_first(&mut lat, &self.principal, a.len(), bc.len(), &cand, self.zero_ideal, &mut out) {
            Some(out)
        } else {
            None
        }
    }

    /// Whether the right unimodular row `(a, b)` is reducible; only `bA`
    /// matters for `b`.
    fn reducible_by_ideal(&self, lat: &mut Lattice, a: &[usize], ideal: &[u32]) -> bool {
        let cand = |k: usize, ci: usize| self.add(a[k], ideal[ci] as usize);
        let mut out = Vec::new();
        dfs_first(lat, &self.principal, a.len(), ideal.len(), &cand, self.zero_ideal, &mut out)
    }

    /// The first irreducible right unimodular `(n+1)`-row, as indices.
    /// Rows are visited by `b` (one `b` per principal ideal), then by the
    /// `a`-tuple in lexicographic order.
    pub fn irreducible_row(&self, n: usize) -> Result<Option<Vec<usize>>> {
        let size = self.len();
        let work = (size as f64).powi(n as i32);
        if work > 1e9 {
            return Err(Error::CapExceeded {
                cardinality: format!("{size}^{n} rows"),
                cap: 1_000_000_000,
            });
        }
        let mut lat = self.lattice.lock().unwrap();
        let mut seen = vec![false; lat.ideals.len().max(size + 1)];
        for b in 0..size {
            let bid = self.principal[b] as usize;
            if seen[bid] {
                continue;
            }
            seen[bid] = true;
            let ideal = self.members(&mut lat, bid as u32);
            let mut a = vec![0usize; n];
            loop {
                let joined = a
                    .iter()
                    .fold(bid as u32, |acc, &i| lat.join(acc, self.principal[i]));
                if lat.full[joined as usize] && !self.reducible_by_ideal(&mut lat, &a, &ideal) {
                    let mut row = a.clone();
                    row.push(b);
                    return Ok(Some(row));
                }
                if !advance(&mut a, size) {
                    break;
                }
            }
        }
        Ok(None)
    }
}

fn principal_ideal(ring: &RingRef, gens: &[Elem], e: &Elem) -> Subgroup {
    let prods: Vec<Elem> = gens.iter().map(|h| ring.mul(e, h)).collect();
    ring.span(&prods, false)
}

fn mixed_radix(moduli: &[u64], c: &[u64]) -> usize {
    c.iter()
        .zip(moduli)
        .fold(0usize, |acc, (x, m)| acc * (*m as usize) + *x as usize)
}

fn advance(t: &mut [usize], size: usize) -> bool {
    for k in (0..t.len()).rev() {
        t[k] += 1;
        if t[k] < size {
            return true;
        }
        t[k] = 0;
    }
    false
}

/// Depth-first search for the first choice (candidate `cand(k, ci)` for
/// position `k`, `ci < width`) whose principal ideals sum to the whole ring.
/// Positions after the ideal becomes full take the first candidate.
fn dfs_first(
    lat: &mut Lattice,
    principal: &[u32],
    len: usize,
    width: usize,
    cand: &dyn Fn(usize, usize) -> usize,
    acc: u32,
    out: &mut Vec<usize>,
) -> bool {
    let k = out.len();
    if lat.full[acc as usize] {
        out.extend(std::iter::repeat_n(0, len - k));
        return true;
    }
    if k == len {
        return false;
    }
    for ci in 0..width {
        let j = lat.join(acc, principal[cand(k, ci)]);
        out.push(ci);
        if dfs_first(lat, principal, len, width, cand, j, out) {
            return true;
        }
        out.pop();
    }
    false
}

/// Reducer for a finite ring by exhaustive search.
#[derive(Debug)]
pub struct FiniteReducer {
    index: Arc<RangeIndex>,
    rank: usize,
}

impl FiniteReducer {
    pub fn new(ring: &RingRef, rank: usize) -> Result<Self> {
        if rank < 1 {
            return Err(Error::InvalidSize(rank));
        }
        Ok(FiniteReducer {
            index: Arc::new(RangeIndex::build(ring)?),
            rank,
        })
    }

    pub fn from_index(index: Arc<RangeIndex>, rank: usize) -> Result<Self> {
        if rank < 1 {
            return Err(Error::InvalidSize(rank));
        }
        Ok(FiniteReducer { index, rank })
    }
}

impl Reducer for FiniteReducer {
    fn ring(&self) -> &RingRef {
        self.index.ring()
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn reduce_traced(&self, row: &[Elem], trace: &mut PipelineTrace) -> Result<Reduction> {
        let ids = self.index.indices_of(row)?;
        if !self.index.is_unimodular(&ids) {
            return Err(Error::NotUnimodular);
        }
        let c = self
            .index
            .first_reduction(&ids)
            .ok_or_else(|| Error::SolverFailure("irreducible row".into()))?;
        let c: Vec<Elem> = c.into_iter().map(|i| self.index.element(i).clone()).collect();
        trace.record("search_reduction", || {
            vec![(
                "c",
                serde_json::Value::Array(c.iter().map(crate::trace::lit).collect()),
            )]
        });
        Reduction::certify(self.ring(), row, c)
    }
}
