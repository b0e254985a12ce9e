//! Fault sets, propagation, and exhaustive enumeration.
//!
//! A fault set pairs X-type faults in syndrome-qubit gaps with flag
//! measurement flips. Enumeration order is fixed everywhere: subset sizes
//! ascending, lexicographic within a size, over the combined universe of
//! gap indices 0..l followed by flag indices l..l+f. Ranks in that order
//! are the deterministic tie-breaker for counterexamples.

use crate::combi::{subsets_up_to, unrank_bounded, unrank_lex};
use crate::f2::BitVector;
use crate::gadget::FlagCircuit;
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaultSet {
    pub syndrome_gaps: Vec<usize>,
    pub flag_flips: Vec<usize>,
}

impl FaultSet {
    pub fn new(mut syndrome_gaps: Vec<usize>, mut flag_flips: Vec<usize>) -> FaultSet {
        syndrome_gaps.sort_unstable();
        flag_flips.sort_unstable();
        FaultSet {
            syndrome_gaps,
            flag_flips,
        }
    }

    pub fn empty() -> FaultSet {
        FaultSet::default()
    }

    /// Total fault count, the right-hand side of the residual-weight bound.
    pub fn size(&self) -> usize {
        self.syndrome_gaps.len() + self.flag_flips.len()
    }
}

/// What a fault set does: the flag pattern it raises and the data error it
/// leaves, as a support vector over the data CNOTs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultEffect {
    pub pattern: BitVector,
    pub data: BitVector,
}

/// Applies the linear fault action: each gap fault XORs its signature column
/// into the pattern and hits every data CNOT at or after the gap; each flag
/// flip toggles one pattern bit.
pub fn propagate(c: &FlagCircuit, fault: &FaultSet) -> FaultEffect {
    let mut pattern = BitVector::zeros(c.f);
    let mut data = BitVector::zeros(c.w());
    for &g in &fault.syndrome_gaps {
        assert!(g < c.l, "gap {g} out of range, circuit has {} gaps", c.l);
        pattern.xor_in_place(&c.fc.col(g));
        for (k, d) in c.data_gaps.iter().enumerate() {
            if d.gap >= g {
                data.flip(k);
            }
        }
    }
    for &j in &fault.flag_flips {
        assert!(j < c.f, "flag {j} out of range, circuit has {} flags", c.f);
        pattern.flip(j);
    }
    FaultEffect { pattern, data }
}

/// Reduces a data-error support modulo the full stabilizer: keep whichever
/// of the vector and its complement has smaller weight, breaking the tie at
/// weight w/2 lexicographically.
pub fn canonical_data(d: &BitVector) -> BitVector {
    let w = d.len();
    let wt = d.weight();
    if 2 * wt > w {
        d.complemented()
    } else if 2 * wt == w {
        let comp = d.complemented();
        if comp < *d {
            comp
        } else {
            d.clone()
        }
    } else {
        d.clone()
    }
}

/// Number of fault sets with at most t faults.
pub fn fault_count(c: &FlagCircuit, t: usize) -> u128 {
    subsets_up_to((c.l + c.f) as u64, t as u64)
}

/// The fault set at the given enumeration rank.
pub fn fault_at(c: &FlagCircuit, t: usize, rank: u128) -> FaultSet {
    let mut indices = Vec::new();
    unrank_bounded(c.l + c.f, t, rank, &mut indices);
    split_members(c.l, &indices)
}

/// All fault sets with at most t faults, in enumeration order. Convenience
/// for small circuits; large scans go through the packed walker.
pub fn enumerate_faults<'a>(
    c: &'a FlagCircuit,
    t: usize,
) -> impl Iterator<Item = FaultSet> + 'a {
    (0..fault_count(c, t)).map(move |r| fault_at(c, t, r))
}

fn split_members(l: usize, members: &[usize]) -> FaultSet {
    let cut = members.partition_point(|&e| e < l);
    FaultSet {
        syndrome_gaps: members[..cut].to_vec(),
        flag_flips: members[cut..].iter().map(|&e| e - l).collect(),
    }
}

/// Circuit tables packed into machine words for exhaustive scans: per
/// universe element, its pattern contribution and data-suffix word.
pub(crate) struct Packed {
    key_of: Vec<u128>,
    data_of: Vec<u64>,
    cum: Vec<u128>,
    pub universe: usize,
    pub t: usize,
}

impl Packed {
    pub fn new(c: &FlagCircuit, t: usize) -> Result<Packed> {
        if c.f > 128 {
            return Err(Error::ResourceLimit {
                what: "flag rows in the packed scan engine".into(),
                required: c.f as u128,
                budget: 128,
            });
        }
        if c.w() > 64 {
            return Err(Error::ResourceLimit {
                what: "data CNOTs in the packed scan engine".into(),
                required: c.w() as u128,
                budget: 64,
            });
        }
        let universe = c.l + c.f;
        let mut key_of = Vec::with_capacity(universe);
        let mut data_of = Vec::with_capacity(universe);
        for g in 0..c.l {
            key_of.push(c.fc.col(g).to_u128());
            let mut word = 0u64;
            for (k, d) in c.data_gaps.iter().enumerate() {
                if d.gap >= g {
                    word |= 1 << k;
                }
            }
            data_of.push(word);
        }
        for j in 0..c.f {
            key_of.push(1u128 << j);
            data_of.push(0);
        }
        let cum: Vec<u128> = (0..=t)
            .map(|k| subsets_up_to(universe as u64, k as u64))
            .collect();
        Ok(Packed {
            key_of,
            data_of,
            cum,
            universe,
            t,
        })
    }

    pub fn total(&self) -> u128 {
        *self.cum.last().unwrap()
    }
}

/// Incremental enumerator over fault sets: seeks to a rank once, then steps
/// in enumeration order updating the packed pattern and data words in place.
pub(crate) struct Walker<'a> {
    p: &'a Packed,
    k: usize,
    indices: Vec<usize>,
    key: u128,
    data: u64,
}

impl<'a> Walker<'a> {
    pub fn start(p: &'a Packed, rank: u128) -> Walker<'a> {
        assert!(rank < p.total(), "rank beyond enumeration");
        let k = p.cum.partition_point(|&c| c <= rank);
        let within = if k == 0 { rank } else { rank - p.cum[k - 1] };
        let mut indices = Vec::with_capacity(p.t);
        unrank_lex(p.universe, k, within, &mut indices);
        let mut w = Walker {
            p,
            k,
            indices,
            key: 0,
            data: 0,
        };
        for i in 0..k {
            w.xor_element(w.indices[i]);
        }
        w
    }

    fn xor_element(&mut self, e: usize) {
        self.key ^= self.p.key_of[e];
        self.data ^= self.p.data_of[e];
    }

    /// Advances to the next fault set. Callers must not step past the end.
    pub fn step(&mut self) {
        let u = self.p.universe;
        let k = self.k;
        // Rightmost index that can still move: indices[i] < u - k + i.
        let mut i = k;
        while i > 0 && self.indices[i - 1] == u - k + (i - 1) {
            i -= 1;
        }
        if i == 0 {
            // Size exhausted, open the next size at its first subset.
            for j in 0..k {
                let e = self.indices[j];
                self.xor_element(e);
            }
            self.k += 1;
            assert!(self.k <= self.p.t, "stepped past the final fault set");
            self.indices.clear();
            for j in 0..self.k {
                self.indices.push(j);
                self.xor_element(j);
            }
            return;
        }
        let i = i - 1;
        for j in i..k {
            let e = self.indices[j];
            self.xor_element(e);
        }
        self.indices[i] += 1;
        for j in i + 1..k {
            self.indices[j] = self.indices[i] + (j - i);
        }
        for j in i..k {
            let e = self.indices[j];
            self.xor_element(e);
        }
    }

    pub fn key(&self) -> u128 {
        self.key
    }

    pub fn data(&self) -> u64 {
        self.data
    }

    pub fn size(&self) -> usize {
        self.k
    }

    #[cfg(test)]
    pub fn fault_set(&self, l: usize) -> FaultSet {
        split_members(l, &self.indices)
    }
}
