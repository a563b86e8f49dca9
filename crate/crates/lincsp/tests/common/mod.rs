//! Instance generators shared by the property and acceptance suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use lincsp::{Constraint, Csp, Literal};

/// Arbitrary valid CSP: k distinct variables per constraint, values in 0..d,
/// duplicates dropped.
pub fn random_csp(
    rng: &mut ChaCha8Rng,
    max_k: usize,
    max_d: u32,
    max_vars: u32,
    max_m: usize,
) -> Csp {
    let k = rng.random_range(1..=max_k);
    let d = rng.random_range(2..=max_d);
    let n = rng.random_range(k as u32..=max_vars.max(k as u32));
    let m_target = rng.random_range(0..=max_m);
    let mut vars: Vec<u32> = (1..=n).collect();
    let mut constraints: Vec<Constraint> = Vec::new();
    for _ in 0..m_target * 3 {
        if constraints.len() >= m_target {
            break;
        }
        vars.shuffle(rng);
        let mut chosen: Vec<u32> = vars[..k].to_vec();
        chosen.sort_unstable();
        let c = Constraint::new(
            chosen
                .into_iter()
                .map(|v| Literal::new(v, rng.random_range(0..d)))
                .collect(),
        )
        .expect("distinct vars");
        if !constraints.contains(&c) {
            constraints.push(c);
        }
    }
    Csp::new(k, d, constraints).expect("constructed valid")
}

/// Random (k,d)-CSP in which every variable's degree stays at or below
/// floor(d^k / (e k)), i.e. the degree condition for guaranteed
/// satisfiability holds by construction.
pub fn degree_capped_csp(rng: &mut ChaCha8Rng, k: usize, d: u32, max_vars: u32) -> Csp {
    let threshold = (d as f64).powi(k as i32) / (std::f64::consts::E * k as f64);
    let cap = threshold.floor() as usize;
    assert!(cap >= 1, "degree cap vanishes for k={k}, d={d}");
    let n = rng.random_range(k as u32..=max_vars);
    let m_limit = (n as usize * cap) / k;
    let m_target = rng.random_range(1..=m_limit.max(1));
    let mut capacity: Vec<usize> = vec![cap; n as usize + 1];
    let mut constraints: Vec<Constraint> = Vec::new();
    'outer: for _ in 0..m_target * 4 {
        if constraints.len() >= m_target {
            break;
        }
        let mut open: Vec<u32> = (1..=n).filter(|&v| capacity[v as usize] > 0).collect();
        if open.len() < k {
            break;
        }
        open.shuffle(rng);
        let mut chosen: Vec<u32> = open[..k].to_vec();
        chosen.sort_unstable();
        let c = Constraint::new(
            chosen
                .iter()
                .map(|&v| Literal::new(v, rng.random_range(0..d)))
                .collect(),
        )
        .expect("distinct vars");
        if constraints.contains(&c) {
            continue 'outer;
        }
        for &v in &chosen {
            capacity[v as usize] -= 1;
        }
        constraints.push(c);
    }
    Csp::new(k, d, constraints).expect("constructed valid")
}

/// 2-disjoint (10,2)-CSP with an exact, controllable set of frequent
/// variables ("hubs"). Each hub appears in 19 dedicated constraints (degree
/// above the ~18.84 threshold), some constraints carry two hubs (a distinct
/// hub pair each, which keeps 2-disjointness), and some carry none. Every
/// other variable occurs exactly once. Returns the instance and the hub count.
pub fn hub_instance(rng: &mut ChaCha8Rng, hubs: usize) -> (Csp, usize) {
    assert!(hubs <= 18, "more than 18 hubs would break the precondition");
    let k = 10;
    let mut next_fresh = hubs as u32 + 1;
    let fresh = |count: usize, next: &mut u32| -> Vec<u32> {
        let vs: Vec<u32> = (*next..*next + count as u32).collect();
        *next += count as u32;
        vs
    };
    let mut rows: Vec<Vec<(u32, u32)>> = Vec::new();
    let push = |vars: Vec<u32>, rng: &mut ChaCha8Rng, rows: &mut Vec<Vec<(u32, u32)>>| {
        let mut vars = vars;
        vars.sort_unstable();
        rows.push(
            vars.into_iter()
                .map(|v| (v, rng.random_range(0..2)))
                .collect(),
        );
    };
    for h in 1..=hubs as u32 {
        for _ in 0..19 {
            let mut vars = fresh(k - 1, &mut next_fresh);
            vars.push(h);
            push(vars, rng, &mut rows);
        }
    }
    if hubs >= 2 {
        let mut pairs: Vec<(u32, u32)> = (1..=hubs as u32)
            .flat_map(|a| ((a + 1)..=hubs as u32).map(move |b| (a, b)))
            .collect();
        pairs.shuffle(rng);
        let take = rng.random_range(0..=pairs.len().min(12));
        for &(a, b) in &pairs[..take] {
            let mut vars = fresh(k - 2, &mut next_fresh);
            vars.push(a);
            vars.push(b);
            push(vars, rng, &mut rows);
        }
    }
    for _ in 0..rng.random_range(3..=8) {
        let vars = fresh(k, &mut next_fresh);
        push(vars, rng, &mut rows);
    }
    let borrowed: Vec<&[(u32, u32)]> = rows.iter().map(|r| r.as_slice()).collect();
    (Csp::from_rows(k, 2, &borrowed).expect("valid by construction"), hubs)
}
