//! Test-side oracles, written without calling the library's algebra code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use relevance_ra::{ConcreteRelation, IntervalSet, Sequence, SymElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum A {
    Id,
    L(i64),
    R(i64),
}

impl A {
    fn idx(self) -> Option<i64> {
        match self {
            A::Id => None,
            A::L(n) | A::R(n) => Some(n),
        }
    }
}

/// The atom products stated as rules: `Id` is a unit, equal atoms are
/// idempotent, `L_n|R_n` and `R_n|L_n` give `Id` plus every diversity
/// atom of index `<= n`, and otherwise the atom of larger index wins.
pub fn rule_product(a: A, b: A, c: A) -> bool {
    match (a, b) {
        (A::Id, _) => c == b,
        (_, A::Id) => c == a,
        _ if a == b => c == a,
        _ => {
            let (m, n) = (a.idx().unwrap(), b.idx().unwrap());
            match m.cmp(&n) {
                std::cmp::Ordering::Equal => c.idx().is_none_or(|k| k <= n),
                std::cmp::Ordering::Less => c == b,
                std::cmp::Ordering::Greater => c == a,
            }
        }
    }
}

/// Elements of the finite restriction as bitsets over an explicit atom list.
pub struct Expansion {
    pub index: Vec<i64>,
    pub atoms: Vec<A>,
}

impl Expansion {
    pub fn new(index: &[i64]) -> Self {
        let mut atoms = vec![A::Id];
        for &k in index {
            atoms.push(A::L(k));
            atoms.push(A::R(k));
        }
        Expansion {
            index: index.to_vec(),
            atoms,
        }
    }

    pub fn size(&self) -> usize {
        self.atoms.len()
    }

    pub fn full(&self) -> u64 {
        (1u64 << self.size()) - 1
    }

    pub fn compose(&self, x: u64, y: u64) -> u64 {
        let mut out = 0;
        for i in 0..self.size() {
            if x >> i & 1 == 0 {
                continue;
            }
            for j in 0..self.size() {
                if y >> j & 1 == 0 {
                    continue;
                }
                for (k, &c) in self.atoms.iter().enumerate() {
                    if rule_product(self.atoms[i], self.atoms[j], c) {
                        out |= 1 << k;
                    }
                }
            }
        }
        out
    }

    pub fn converse(&self, x: u64) -> u64 {
        let mut out = 0;
        for (i, a) in self.atoms.iter().enumerate() {
            if x >> i & 1 == 1 {
                let c = match *a {
                    A::Id => A::Id,
                    A::L(n) => A::R(n),
                    A::R(n) => A::L(n),
                };
                out |= 1 << self.atoms.iter().position(|&b| b == c).unwrap();
            }
        }
        out
    }

    pub fn residual(&self, x: u64, y: u64) -> u64 {
        self.full() & !self.compose(self.converse(x), self.full() & !y)
    }

    pub fn to_sym(&self, x: u64) -> SymElement {
        let i = IntervalSet::from_values(self.index.iter().copied());
        let pick = |want: fn(A) -> Option<i64>| {
            IntervalSet::from_values(
                self.atoms
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| x >> k & 1 == 1)
                    .filter_map(|(_, &a)| want(a)),
            )
        };
        let l = pick(|a| if let A::L(n) = a { Some(n) } else { None });
        let r = pick(|a| if let A::R(n) = a { Some(n) } else { None });
        SymElement::new(&i, x & 1 == 1, &l, &r)
    }

    pub fn from_sym(&self, e: &SymElement) -> u64 {
        let mut out = 0;
        for (k, a) in self.atoms.iter().enumerate() {
            let inside = match *a {
                A::Id => e.has_id(),
                A::L(n) => e.lset().contains(n),
                A::R(n) => e.rset().contains(n),
            };
            if inside {
                out |= 1 << k;
            }
        }
        out
    }
}

/// Subsets of `[lo, hi]` with at most `max` members.
pub fn small_subsets(lo: i64, hi: i64, max: usize) -> Vec<Vec<i64>> {
    let pool: Vec<i64> = (lo..=hi).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pool.len() {
        if (mask.count_ones() as usize) <= max {
            out.push((0..pool.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pool[i]).collect());
        }
    }
    out
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rand_q<R: Rng>(rng: &mut R) -> BigRational {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=6))
}

pub fn rand_seq<R: Rng>(rng: &mut R, support: &[i64]) -> Sequence<BigRational> {
    Sequence::from_entries(support.iter().map(|&k| (k, rand_q(rng))))
}

/// The atom of `(q, r)` by the largest disagreeing index.
pub fn oracle_classify(q: &Sequence<BigRational>, r: &Sequence<BigRational>, support: &[i64]) -> A {
    let mut idx = support.to_vec();
    idx.sort_unstable();
    for &k in idx.iter().rev() {
        let (a, b) = (q.get(k), r.get(k));
        if a < b {
            return A::L(k);
        }
        if a > b {
            return A::R(k);
        }
    }
    A::Id
}

/// A sequence `r` with `(q, r)` in atom `c`: agrees with `q` above the
/// index of `c`, moves the entry at that index in the right direction and
/// is random below it.
pub fn seq_in_atom<R: Rng>(rng: &mut R, q: &Sequence<BigRational>, c: A, support: &[i64]) -> Sequence<BigRational> {
    let Some(k) = c.idx() else {
        return q.clone();
    };
    let mut r = Sequence::zero();
    for &j in support {
        let v = if j > k {
            q.get(j)
        } else if j == k {
            let step = rat(rng.gen_range(1..=9), rng.gen_range(1..=4));
            if matches!(c, A::L(_)) {
                q.get(j) + step
            } else {
                q.get(j) - step
            }
        } else {
            rand_q(rng)
        };
        r.set(j, v);
    }
    r
}

pub fn rand_relation<R: Rng>(rng: &mut R, base: usize) -> ConcreteRelation {
    let rows: Vec<u64> = (0..base).map(|_| rng.gen()).collect();
    ConcreteRelation::from_rows(base, &rows)
}

pub fn lib_atom(a: A) -> relevance_ra::Atom {
    match a {
        A::Id => relevance_ra::Atom::Id,
        A::L(n) => relevance_ra::Atom::L(n),
        A::R(n) => relevance_ra::Atom::R(n),
    }
}
