//! Instance families shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use acyclic_backdoors::generators::gen_random_rcnf;
use acyclic_backdoors::{Assignment, Formula, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random r-CNF with `3 ≤ n ≤ n_max` and `1 ≤ m ≤ m_max`.
pub fn random_instance(rng: &mut ChaCha8Rng, n_max: u32, m_max: usize, r: usize) -> Formula {
    let n = rng.gen_range(r.max(3) as u32..=n_max);
    let m = rng.gen_range(1..=m_max);
    gen_random_rcnf(n, m, r, rng.gen()).unwrap()
}

/// Each variable of the universe stays open, or is set false or true, with
/// equal probability.
pub fn random_partial(rng: &mut ChaCha8Rng, f: &Formula) -> Assignment {
    f.universe()
        .iter()
        .filter_map(|&v| match rng.gen_range(0..3) {
            0 => None,
            b => Some((v, b == 2)),
        })
        .collect()
}

/// Gadget `i` on `a_i, b_i` is the incidence 4-cycle
/// `(a ∨ b ∨ K) ∧ (a ∨ ¬b ∨ ¬K)`; each of its killers `K` occurs with
/// opposite signs in the two clauses.
pub fn strong_gadgets(killers: &[Vec<i64>]) -> Formula {
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for (i, ks) in killers.iter().enumerate() {
        let a = 2 * i as i64 + 1;
        let mut c0 = vec![a, a + 1];
        let mut c1 = vec![a, -(a + 1)];
        c0.extend(ks.iter().copied());
        c1.extend(ks.iter().map(|k| -k));
        clauses.push(c0);
        clauses.push(c1);
    }
    from_lists(&clauses)
}

/// Gadget `i` is `(a ∨ b ∨ K) ∧ (¬a ∨ ¬b ∨ K)`: setting any killer to
/// true removes the whole gadget.
pub fn weak_gadgets(killers: &[Vec<i64>]) -> Formula {
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for (i, ks) in killers.iter().enumerate() {
        let a = 2 * i as i64 + 1;
        let mut c0 = vec![a, a + 1];
        let mut c1 = vec![-a, -(a + 1)];
        c0.extend(ks.iter().copied());
        c1.extend(ks.iter().copied());
        clauses.push(c0);
        clauses.push(c1);
    }
    from_lists(&clauses)
}

pub fn from_lists(clauses: &[Vec<i64>]) -> Formula {
    let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
    Formula::from_ints(&refs).unwrap()
}

/// Three gadgets on variables 1..=6 with killers drawn from 7..=10, each
/// gadget getting one or two of them. At most 10 variables.
pub fn crafted_killer_family(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    (0..3)
        .map(|_| {
            let count = rng.gen_range(1..=2);
            let mut ks: Vec<i64> = Vec::new();
            while ks.len() < count {
                let k = rng.gen_range(7..=10);
                if !ks.contains(&k) {
                    ks.push(k);
                }
            }
            ks.sort();
            ks
        })
        .collect()
}

/// 20 strong instances with at most 10 variables: gadget families
/// exercising the rules plus a few fixed shapes.
pub fn crafted_strong() -> Vec<Formula> {
    let mut out = vec![
        strong_gadgets(&[vec![7], vec![7], vec![7]]),
        strong_gadgets(&[vec![7, 8], vec![7, 8], vec![7, 8]]),
        strong_gadgets(&[vec![7, 8], vec![9, 10], vec![7, 9]]),
        strong_gadgets(&[vec![], vec![]]),
        acyclic_backdoors::generators::gen_grid(2).unwrap(),
        from_lists(&[vec![1, 2], vec![-1, 2], vec![1, -2]]),
    ];
    let mut r = rng(0x5eed);
    while out.len() < 20 {
        out.push(strong_gadgets(&crafted_killer_family(&mut r)));
    }
    out
}

/// Weak counterparts of [`crafted_strong`].
pub fn crafted_weak() -> Vec<Formula> {
    let mut out = vec![
        weak_gadgets(&[vec![7], vec![7], vec![7]]),
        weak_gadgets(&[vec![7], vec![7], vec![]]),
        weak_gadgets(&[vec![], vec![], vec![]]),
        weak_gadgets(&[vec![7, 8], vec![8, 9], vec![9, 10]]),
    ];
    let mut r = rng(0xbeef);
    while out.len() < 20 {
        out.push(weak_gadgets(&crafted_killer_family(&mut r)));
    }
    out
}

pub fn set(ids: &[u32]) -> BTreeSet<Var> {
    ids.iter().map(|&i| Var::from_id(i)).collect()
}
