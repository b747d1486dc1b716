//! Congruence subgroups of PSL2(Z): membership, coset enumeration, and the
//! tau transition dynamics on coset representatives.
//!
//! Everything is projective: a matrix and its negative are the same element,
//! which is why the membership congruences test both signs.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::json;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mat2::Mat2;

/// A congruence subgroup, taken as its image in PSL2(Z).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupSpec {
    Full,
    Gamma0(u32),
    Gamma1(u32),
    GammaPrincipal(u32),
}

impl SubgroupSpec {
    pub fn level(&self) -> u32 {
        match self {
            SubgroupSpec::Full => 1,
            SubgroupSpec::Gamma0(n) | SubgroupSpec::Gamma1(n) | SubgroupSpec::GammaPrincipal(n) => *n,
        }
    }

    /// Index in PSL2(Z) by the classical formulas.
    pub fn index_formula(&self) -> u64 {
        let n = self.level() as u64;
        if n == 1 {
            return 1;
        }
        let primes = prime_divisors(n);
        match self {
            SubgroupSpec::Full => 1,
            SubgroupSpec::Gamma0(_) => {
                // psi(n) = n * prod (1 + 1/p)
                let mut idx = n;
                for p in &primes {
                    idx = idx / p * (p + 1);
                }
                idx
            }
            SubgroupSpec::Gamma1(_) => {
                // [SL2 : Gamma1(n)] = n^2 prod (1 - 1/p^2); halve in PSL2 once -I leaves
                let mut idx = n * n;
                for p in &primes {
                    idx = idx / (p * p) * (p * p - 1);
                }
                if n > 2 {
                    idx / 2
                } else {
                    idx
                }
            }
            SubgroupSpec::GammaPrincipal(_) => {
                // |SL2(Z/n)| = n^3 prod (1 - 1/p^2); halve in PSL2 for n > 2
                let mut idx = n * n * n;
                for p in &primes {
                    idx = idx / (p * p) * (p * p - 1);
                }
                if n > 2 {
                    idx / 2
                } else {
                    idx
                }
            }
        }
    }

    pub fn parse(s: &str) -> Result<SubgroupSpec> {
        let s = s.trim().to_ascii_lowercase();
        if s == "full" || s == "psl2" {
            return Ok(SubgroupSpec::Full);
        }
        let parse_level = |t: &str| -> Result<u32> {
            t.parse::<u32>().map_err(|e| Error::InvalidInput(format!("bad level: {e}")))
        };
        if let Some(rest) = s.strip_prefix("gamma0:") {
            return Ok(SubgroupSpec::Gamma0(parse_level(rest)?));
        }
        if let Some(rest) = s.strip_prefix("gamma1:") {
            return Ok(SubgroupSpec::Gamma1(parse_level(rest)?));
        }
        if let Some(rest) = s.strip_prefix("gamma:") {
            return Ok(SubgroupSpec::GammaPrincipal(parse_level(rest)?));
        }
        Err(Error::InvalidInput(format!("unknown group spec: {s}")))
    }
}

impl std::fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubgroupSpec::Full => write!(f, "full"),
            SubgroupSpec::Gamma0(n) => write!(f, "gamma0:{n}"),
            SubgroupSpec::Gamma1(n) => write!(f, "gamma1:{n}"),
            SubgroupSpec::GammaPrincipal(n) => write!(f, "gamma:{n}"),
        }
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn umod(x: &BigInt, n: u32) -> u32 {
    use num_traits::ToPrimitive;
    let n_big = BigInt::from(n);
    let r = ((x % &n_big) + &n_big) % &n_big;
    r.to_u32().unwrap()
}

/// Membership of +-g in the subgroup. Errors on non-unimodular input.
pub fn member(spec: SubgroupSpec, g: &Mat2) -> Result<bool> {
    g.require_unimodular()?;
    let n = spec.level();
    if matches!(spec, SubgroupSpec::Full) {
        return Ok(true);
    }
    let (a, b, c, d) = (umod(&g.a, n), umod(&g.b, n), umod(&g.c, n), umod(&g.d, n));
    let ok = match spec {
        SubgroupSpec::Full => true,
        SubgroupSpec::Gamma0(_) => c == 0,
        SubgroupSpec::Gamma1(_) => {
            c == 0 && ((a == 1 % n && d == 1 % n) || (a == (n - 1) % n && d == (n - 1) % n))
        }
        SubgroupSpec::GammaPrincipal(_) => {
            c == 0 && b == 0 && ((a == 1 % n && d == 1 % n) || (a == (n - 1) % n && d == (n - 1) % n))
        }
    };
    Ok(ok)
}

/// Complete invariant of the coset G*g, used as a hash key. For Gamma0 it is
/// the bottom row as a point of P^1(Z/n); for Gamma1 the bottom row up to
/// sign; for Gamma(n) the entire matrix mod n up to sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum CosetKey {
    Trivial,
    P1(u32, u32),
    Row(u32, u32),
    Matrix([u32; 4]),
}

fn coset_key(spec: SubgroupSpec, g: &Mat2) -> CosetKey {
    let n = spec.level();
    match spec {
        SubgroupSpec::Full => CosetKey::Trivial,
        SubgroupSpec::Gamma0(_) => {
            let (c, d) = (umod(&g.c, n), umod(&g.d, n));
            CosetKey::P1(p1_normalize(c, d, n).0, p1_normalize(c, d, n).1)
        }
        SubgroupSpec::Gamma1(_) => {
            let (c, d) = (umod(&g.c, n), umod(&g.d, n));
            let neg = ((n - c % n) % n, (n - d % n) % n);
            let pos = (c, d);
            CosetKey::Row(pos.min(neg).0, pos.min(neg).1)
        }
        SubgroupSpec::GammaPrincipal(_) => {
            let m = [umod(&g.a, n), umod(&g.b, n), umod(&g.c, n), umod(&g.d, n)];
            let neg = [(n - m[0] % n) % n, (n - m[1] % n) % n, (n - m[2] % n) % n, (n - m[3] % n) % n];
            CosetKey::Matrix(m.min(neg))
        }
    }
}

/// Canonical representative of (c:d) in P^1(Z/n): the lexicographically
/// smallest scalar multiple by units of Z/n.
fn p1_normalize(c: u32, d: u32, n: u32) -> (u32, u32) {
    if n == 1 {
        return (0, 0);
    }
    let mut best = (u32::MAX, u32::MAX);
    let n64 = n as u64;
    for lam in 1..n {
        if gcd(lam as u64, n64) != 1 {
            continue;
        }
        let nc = ((c as u64 * lam as u64) % n64) as u32;
        let nd = ((d as u64 * lam as u64) % n64) as u32;
        if (nc, nd) < best {
            best = (nc, nd);
        }
    }
    best
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Generator used in the BFS closure, in tie-breaking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    S,
    T,
    TInv,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::S, Gen::T, Gen::TInv];

    fn matrix(self) -> Mat2 {
        match self {
            Gen::S => Mat2::s(),
            Gen::T => Mat2::t(),
            Gen::TInv => Mat2::t_pow(-1),
        }
    }
}

/// An element of G witnessing a coset identity.
#[derive(Clone, Debug)]
pub struct GroupWitness {
    pub g: Mat2,
}

/// Fixed representatives of the cosets G\PSL2(Z) with the right-multiplication
/// action of the generators. Immutable after enumeration.
pub struct CosetTable {
    pub spec: SubgroupSpec,
    reps: Vec<Mat2>,
    index_of: HashMap<CosetKey, usize>,
    right_mul: Vec<[usize; 3]>,
}

impl CosetTable {
    /// Breadth-first closure of the identity coset under right multiplication
    /// by S, T, T^-1, in that order; representatives are first-encountered
    /// words, so tables are reproducible.
    pub fn enumerate(spec: SubgroupSpec) -> CosetTable {
        let mut reps: Vec<Mat2> = vec![Mat2::identity()];
        let mut index_of = HashMap::new();
        index_of.insert(coset_key(spec, &reps[0]), 0usize);
        let mut frontier = 0usize;
        while frontier < reps.len() {
            let cur = reps[frontier].clone();
            for gen in Gen::ALL {
                let cand = &cur * &gen.matrix();
                let key = coset_key(spec, &cand);
                index_of.entry(key).or_insert_with(|| {
                    reps.push(cand.psl_normalize());
                    reps.len() - 1
                });
            }
            frontier += 1;
        }
        let mut right_mul = Vec::with_capacity(reps.len());
        for rep in &reps {
            let mut row = [0usize; 3];
            for (j, gen) in Gen::ALL.iter().enumerate() {
                let img = rep * &gen.matrix();
                row[j] = index_of[&coset_key(spec, &img)];
            }
            right_mul.push(row);
        }
        CosetTable { spec, reps, index_of, right_mul }
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, i: usize) -> &Mat2 {
        &self.reps[i]
    }

    pub fn reps(&self) -> &[Mat2] {
        &self.reps
    }

    pub fn check_rep(&self, i: usize) -> Result<()> {
        if i < self.reps.len() {
            Ok(())
        } else {
            Err(Error::CosetOutOfRange(i, self.reps.len()))
        }
    }

    /// Index of the coset containing g: the unique i with g * reps[i]^-1 in G.
    pub fn coset_of(&self, g: &Mat2) -> usize {
        self.index_of[&coset_key(self.spec, g)]
    }

    pub fn right_mul(&self, i: usize, gen: Gen) -> usize {
        let j = match gen {
            Gen::S => 0,
            Gen::T => 1,
            Gen::TInv => 2,
        };
        self.right_mul[i][j]
    }

    /// The transition e -> coset of reps[e] * S * T^x, with the witness
    /// reps[e] * S * T^x * reps[e']^-1, an element of G.
    pub fn tau(&self, x: &BigInt, e: usize) -> Result<(usize, GroupWitness)> {
        if x.is_zero() {
            return Err(Error::ZeroLetter);
        }
        self.check_rep(e)?;
        let moved = &(&self.reps[e] * &Mat2::s()) * &Mat2::t_pow(x.clone());
        let e2 = self.coset_of(&moved);
        let w = &moved * &self.reps[e2].inverse()?;
        debug_assert!(member(self.spec, &w).unwrap());
        Ok((e2, GroupWitness { g: w }))
    }

    /// Coset permutation e -> tau_x(e) without the witness.
    pub fn tau_index(&self, x: &BigInt, e: usize) -> Result<usize> {
        if x.is_zero() {
            return Err(Error::ZeroLetter);
        }
        self.check_rep(e)?;
        let moved = &(&self.reps[e] * &Mat2::s()) * &Mat2::t_pow(x.clone());
        Ok(self.coset_of(&moved))
    }

    /// JSON dump: spec, index, representatives as 4-integer arrays, and the
    /// right-multiplication tables.
    pub fn to_json(&self) -> serde_json::Value {
        let reps: Vec<serde_json::Value> = self
            .reps
            .iter()
            .map(|m| json!([m.a.to_string(), m.b.to_string(), m.c.to_string(), m.d.to_string()]))
            .collect();
        json!({
            "spec": self.spec.to_string(),
            "index": self.index(),
            "reps": reps,
            "right_mul": {
                "S": self.right_mul.iter().map(|r| r[0]).collect::<Vec<_>>(),
                "T": self.right_mul.iter().map(|r| r[1]).collect::<Vec<_>>(),
                "Tinv": self.right_mul.iter().map(|r| r[2]).collect::<Vec<_>>(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_examples() {
        assert!(member(SubgroupSpec::Full, &Mat2::s()).unwrap());
        assert!(!member(SubgroupSpec::Gamma0(2), &Mat2::s()).unwrap());
        assert!(member(SubgroupSpec::Gamma0(11), &Mat2::new(1, 0, 11, 1)).unwrap());
        // -g is the same element in PSL2
        assert!(member(SubgroupSpec::Gamma1(5), &Mat2::new(-1, -3, 0, -1)).unwrap());
        assert!(member(SubgroupSpec::GammaPrincipal(3), &Mat2::new(-1, -3, -3, -10)).unwrap());
        assert!(member(SubgroupSpec::Full, &Mat2::new(1, 1, 1, 1)).is_err());
    }

    #[test]
    fn indices_match_formula() {
        for n in 1..=30u32 {
            let t = CosetTable::enumerate(SubgroupSpec::Gamma0(n));
            assert_eq!(t.index() as u64, SubgroupSpec::Gamma0(n).index_formula(), "Gamma0({n})");
        }
        for n in 1..=10u32 {
            let t = CosetTable::enumerate(SubgroupSpec::Gamma1(n));
            assert_eq!(t.index() as u64, SubgroupSpec::Gamma1(n).index_formula(), "Gamma1({n})");
            let t = CosetTable::enumerate(SubgroupSpec::GammaPrincipal(n));
            assert_eq!(t.index() as u64, SubgroupSpec::GammaPrincipal(n).index_formula(), "Gamma({n})");
        }
        assert_eq!(CosetTable::enumerate(SubgroupSpec::Full).index(), 1);
        assert_eq!(CosetTable::enumerate(SubgroupSpec::Gamma0(2)).index(), 3);
        assert_eq!(CosetTable::enumerate(SubgroupSpec::Gamma0(11)).index(), 12);
    }

    #[test]
    fn reps_distinct_and_identity_first() {
        let t = CosetTable::enumerate(SubgroupSpec::Gamma0(6));
        assert_eq!(t.rep(0), &Mat2::identity());
        for i in 0..t.index() {
            assert_eq!(t.coset_of(t.rep(i)), i);
            for j in 0..t.index() {
                if i != j {
                    let q = t.rep(i) * &t.rep(j).inverse().unwrap();
                    assert!(!member(t.spec, &q).unwrap(), "reps {i} and {j} collide");
                }
            }
        }
    }

    #[test]
    fn coset_of_stable_under_g() {
        // gamma * reps[i] lands back in coset i for gamma in G
        let t = CosetTable::enumerate(SubgroupSpec::Gamma0(11));
        let gammas = [
            Mat2::new(1, 1, 0, 1),
            Mat2::new(1, 0, 11, 1),
            Mat2::new(12, 1, 11, 1),
            Mat2::new(67, 6, 11 * 21, 21 * 6 - 5), // any unimodular with c ≡ 0 (11)
        ];
        for g in &gammas {
            if !g.is_unimodular() {
                continue;
            }
            assert!(member(t.spec, g).unwrap());
            for i in 0..t.index() {
                let moved = g * t.rep(i);
                assert_eq!(t.coset_of(&moved), i);
            }
        }
    }

    #[test]
    fn presentation_relations_on_cosets() {
        // S twice is the identity permutation; (S then T) three times too.
        for spec in [SubgroupSpec::Gamma0(7), SubgroupSpec::Gamma1(5), SubgroupSpec::GammaPrincipal(4)] {
            let t = CosetTable::enumerate(spec);
            for i in 0..t.index() {
                let s2 = t.right_mul(t.right_mul(i, Gen::S), Gen::S);
                assert_eq!(s2, i);
                let mut j = i;
                for _ in 0..3 {
                    j = t.right_mul(t.right_mul(j, Gen::S), Gen::T);
                }
                assert_eq!(j, i);
            }
        }
    }

    #[test]
    fn tau_basics() {
        let full = CosetTable::enumerate(SubgroupSpec::Full);
        let (e2, w) = full.tau(&BigInt::from(3), 0).unwrap();
        assert_eq!(e2, 0);
        assert!(w.g.proj_eq(&(Mat2::s() * Mat2::t_pow(3))));

        let t = CosetTable::enumerate(SubgroupSpec::Gamma0(2));
        // e' = coset of S T^1 from the identity coset
        let (e2, w) = t.tau(&BigInt::from(1), 0).unwrap();
        assert_eq!(e2, t.coset_of(&(Mat2::s() * Mat2::t())));
        assert!(member(t.spec, &w.g).unwrap());
    }

    #[test]
    fn tau_is_permutation_and_witnessed() {
        for spec in [SubgroupSpec::Gamma0(2), SubgroupSpec::Gamma0(11), SubgroupSpec::Gamma1(4)] {
            let t = CosetTable::enumerate(spec);
            for x in (-10i64..=10).filter(|x| *x != 0) {
                let x = BigInt::from(x);
                let mut seen = vec![false; t.index()];
                for e in 0..t.index() {
                    let (e2, w) = t.tau(&x, e).unwrap();
                    assert!(!seen[e2]);
                    seen[e2] = true;
                    assert!(member(t.spec, &w.g).unwrap());
                }
            }
        }
    }

    #[test]
    fn json_dump_shape() {
        let t = CosetTable::enumerate(SubgroupSpec::Gamma0(2));
        let v = t.to_json();
        assert_eq!(v["index"], 3);
        assert_eq!(v["reps"].as_array().unwrap().len(), 3);
    }
}
