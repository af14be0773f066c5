use std::collections::HashMap;

use super::{Elem, Ring};

/// A finite ring's elements in their fixed deterministic order, with index
/// lookup and, for tiny rings, precomputed operation tables.
#[derive(Debug)]
pub struct Enumeration {
    elems: Vec<Elem>,
    index: HashMap<Elem, u32>,
    add: Option<Vec<u16>>,
    mul: Option<Vec<u16>>,
}

impl Enumeration {
    pub(crate) fn build(ring: &Ring, tables: bool) -> Self {
        let elems = ring.element_list();
        let index: HashMap<Elem, u32> = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        let (add, mul) = if tables {
            let n = elems.len();
            let mut add = Vec::with_capacity(n * n);
            let mut mul = Vec::with_capacity(n * n);
            for a in &elems {
                for b in &elems {
                    add.push(index[&ring.add(a, b)] as u16);
                    mul.push(index[&ring.mul(a, b)] as u16);
                }
            }
            (Some(add), Some(mul))
        } else {
            (None, None)
        };
        Enumeration {
            elems,
            index,
            add,
            mul,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> &Elem {
        &self.elems[i]
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).map(|&i| i as usize)
    }

    pub fn add_idx(&self, ring: &Ring, i: usize, j: usize) -> usize {
        match &self.add {
            Some(t) => t[i * self.elems.len() + j] as usize,
            None => self.index[&ring.add(&self.elems[i], &self.elems[j])] as usize,
        }
    }

    pub fn mul_idx(&self, ring: &Ring, i: usize, j: usize) -> usize {
        match &self.mul {
            Some(t) => t[i * self.elems.len() + j] as usize,
            None => self.index[&ring.mul(&self.elems[i], &self.elems[j])] as usize,
        }
    }
}
