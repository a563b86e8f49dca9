//! Exhaustive census of small linear 2-CNF formulas up to variable renaming
//! and per-variable sign flips, used to pin down the least clause count of an
//! unsatisfiable one.
//!
//! Formulas are grown one clause at a time from a single canonical seed; each
//! candidate is canonicalized (minimum image over class-respecting vertex
//! permutations and all sign flips, computed per connected component) and
//! deduplicated, and every canonical class is decided with the 2-SAT path.

use std::collections::{BTreeSet, HashSet};

use crate::csp::Csp;
use crate::error::{Error, Result};
use crate::solver::two_sat_solve;

/// One clause over two distinct variables: (u, v, a, b) encodes
/// {u != a, v != b} with u < v. Tuple order doubles as the canonical order.
type SignedPair = (u8, u8, u8, u8);

#[derive(Debug, Clone)]
pub struct MinLinearReport {
    pub max_clauses: usize,
    /// `classes_by_size[c-1]` = canonical classes with exactly c clauses, for
    /// every fully enumerated size.
    pub classes_by_size: Vec<u64>,
    /// Satisfiability decisions made (canonical classes plus, at size 6, raw
    /// extension checks until the first unsatisfiable formula).
    pub checked: u64,
    pub all_satisfiable: bool,
    pub unsat_example: Option<Csp>,
}

/// Enumerates every linear 2-CNF formula with at most `max_clauses` clauses
/// (up to renaming and sign flips) and decides each. Sizes up to 5 are swept
/// completely; at `max_clauses = 6` the size-6 layer is scanned until an
/// unsatisfiable formula shows up.
pub fn experiment_min_linear_2cnf(max_clauses: usize) -> Result<MinLinearReport> {
    if max_clauses == 0 || max_clauses > 6 {
        return Err(Error::Parameter(format!(
            "supported clause budget is 1..=6, got {max_clauses}"
        )));
    }
    let full_levels = max_clauses.min(5);
    let mut report = MinLinearReport {
        max_clauses,
        classes_by_size: Vec::new(),
        checked: 0,
        all_satisfiable: true,
        unsat_example: None,
    };

    let seed: Vec<SignedPair> = vec![(1, 2, 0, 0)];
    let mut level: BTreeSet<Vec<SignedPair>> = BTreeSet::new();
    level.insert(canonical_form(&seed));

    for size in 1..=full_levels {
        report.classes_by_size.push(level.len() as u64);
        for formula in &level {
            report.checked += 1;
            if !is_satisfiable(formula) {
                report.all_satisfiable = false;
                report.unsat_example.get_or_insert_with(|| to_csp(formula));
            }
        }
        if size == full_levels {
            break;
        }
        let mut next: BTreeSet<Vec<SignedPair>> = BTreeSet::new();
        for formula in &level {
            for ext in extensions(formula) {
                next.insert(canonical_form(&ext));
            }
        }
        level = next;
    }

    if max_clauses == 6 {
        'scan: for formula in &level {
            for ext in extensions(formula) {
                report.checked += 1;
                if !is_satisfiable(&ext) {
                    report.all_satisfiable = false;
                    report.unsat_example = Some(to_csp(&ext));
                    break 'scan;
                }
            }
        }
    }
    Ok(report)
}

fn to_csp(formula: &[SignedPair]) -> Csp {
    let rows: Vec<Vec<(u32, u32)>> = formula
        .iter()
        .map(|&(u, v, a, b)| vec![(u as u32, a as u32), (v as u32, b as u32)])
        .collect();
    let borrowed: Vec<&[(u32, u32)]> = rows.iter().map(|r| r.as_slice()).collect();
    Csp::from_rows(2, 2, &borrowed).expect("enumerated formulas are valid")
}

fn is_satisfiable(formula: &[SignedPair]) -> bool {
    two_sat_solve(&to_csp(formula))
        .expect("(2,2) by construction")
        .is_satisfied()
}

/// All one-clause extensions that keep the formula linear, with fresh
/// variables normalized (their sign is absorbed by a flip, so only one sign
/// per fresh variable is generated).
fn extensions(formula: &[SignedPair]) -> Vec<Vec<SignedPair>> {
    let nv = formula
        .iter()
        .map(|&(_, v, _, _)| v)
        .max()
        .unwrap_or(0);
    let used: HashSet<(u8, u8)> = formula.iter().map(|&(u, v, _, _)| (u, v)).collect();
    let mut out = Vec::new();
    let mut push = |clause: SignedPair| {
        let mut next = formula.to_vec();
        next.push(clause);
        out.push(next);
    };
    for u in 1..=nv {
        for v in (u + 1)..=nv {
            if used.contains(&(u, v)) {
                continue;
            }
            for a in 0..2u8 {
                for b in 0..2u8 {
                    push((u, v, a, b));
                }
            }
        }
    }
    for u in 1..=nv {
        for a in 0..2u8 {
            push((u, nv + 1, a, 0));
        }
    }
    push((nv + 1, nv + 2, 0, 0));
    out
}

/// Minimum image of the formula under variable relabeling and per-variable
/// sign flips; components are canonicalized independently and reassembled in
/// a fixed order, which keeps the permutation search tiny.
fn canonical_form(formula: &[SignedPair]) -> Vec<SignedPair> {
    let mut vars: Vec<u8> = formula
        .iter()
        .flat_map(|&(u, v, _, _)| [u, v])
        .collect();
    vars.sort_unstable();
    vars.dedup();
    let local = |x: u8| vars.binary_search(&x).expect("var present");

    // Connected components of the underlying graph.
    let n = vars.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v, _, _) in formula {
        let (lu, lv) = (local(u), local(v));
        adj[lu].push(lv);
        adj[lv].push(lu);
    }
    let mut comp = vec![usize::MAX; n];
    let mut n_comps = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = n_comps;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if comp[y] == usize::MAX {
                    comp[y] = n_comps;
                    stack.push(y);
                }
            }
        }
        n_comps += 1;
    }

    let mut canon_comps: Vec<(usize, Vec<SignedPair>)> = Vec::with_capacity(n_comps);
    for c in 0..n_comps {
        let members: Vec<usize> = (0..n).filter(|&x| comp[x] == c).collect();
        let reindex = |x: usize| members.binary_search(&x).expect("member") as u8;
        let edges: Vec<SignedPair> = formula
            .iter()
            .filter(|&&(u, _, _, _)| comp[local(u)] == c)
            .map(|&(u, v, a, b)| (reindex(local(u)), reindex(local(v)), a, b))
            .collect();
        canon_comps.push((members.len(), canon_component(members.len(), &edges)));
    }
    canon_comps.sort_unstable_by(|a, b| (a.1.len(), &a.1, a.0).cmp(&(b.1.len(), &b.1, b.0)));

    let mut out = Vec::with_capacity(formula.len());
    let mut offset: u8 = 1;
    for (nv, edges) in canon_comps {
        for (u, v, a, b) in edges {
            out.push((u + offset, v + offset, a, b));
        }
        offset += nv as u8;
    }
    out.sort_unstable();
    out
}

/// Canonical form of one connected component with 0-based vertices.
fn canon_component(nv: usize, edges: &[SignedPair]) -> Vec<SignedPair> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &(u, v, _, _) in edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    let colors = refine_colors(nv, &adj);
    let perms = class_respecting_perms(nv, &colors);

    let mut best: Option<Vec<SignedPair>> = None;
    let mut candidate = vec![(0u8, 0u8, 0u8, 0u8); edges.len()];
    for perm in &perms {
        for flips in 0u32..(1 << nv) {
            for (slot, &(u, v, a, b)) in candidate.iter_mut().zip(edges) {
                let (pu, pv) = (perm[u as usize], perm[v as usize]);
                let na = a ^ ((flips >> pu) & 1) as u8;
                let nb = b ^ ((flips >> pv) & 1) as u8;
                *slot = if pu < pv {
                    (pu, pv, na, nb)
                } else {
                    (pv, pu, nb, na)
                };
            }
            candidate.sort_unstable();
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate.clone());
            }
        }
    }
    best.expect("at least the identity permutation runs")
}

/// Iterated neighborhood refinement starting from degrees; the resulting
/// classes are isomorphism-invariant, so restricting the canonical search to
/// class-respecting permutations is sound.
fn refine_colors(nv: usize, adj: &[Vec<usize>]) -> Vec<u32> {
    let mut colors: Vec<u32> = adj.iter().map(|a| a.len() as u32).collect();
    loop {
        let mut sigs: Vec<(u32, Vec<u32>)> = (0..nv)
            .map(|x| {
                let mut around: Vec<u32> = adj[x].iter().map(|&y| colors[y]).collect();
                around.sort_unstable();
                (colors[x], around)
            })
            .collect();
        let mut distinct: Vec<(u32, Vec<u32>)> = sigs.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let old_classes = {
            let mut cs = colors.clone();
            cs.sort_unstable();
            cs.dedup();
            cs.len()
        };
        if distinct.len() == old_classes {
            return colors;
        }
        for (x, sig) in sigs.drain(..).enumerate() {
            colors[x] = distinct.binary_search(&sig).expect("own signature") as u32;
        }
    }
}

/// All bijections vertex -> position mapping each refinement class onto a
/// contiguous position block (blocks ordered by class color).
fn class_respecting_perms(nv: usize, colors: &[u32]) -> Vec<Vec<u8>> {
    let mut class_ids: Vec<u32> = colors.to_vec();
    class_ids.sort_unstable();
    class_ids.dedup();
    let mut blocks: Vec<Vec<usize>> = Vec::new(); // vertices per class
    let mut start = Vec::new(); // first position per class
    let mut pos = 0u8;
    for &cid in &class_ids {
        let members: Vec<usize> = (0..nv).filter(|&x| colors[x] == cid).collect();
        start.push(pos);
        pos += members.len() as u8;
        blocks.push(members);
    }
    let mut perms: Vec<Vec<u8>> = vec![vec![0; nv]];
    for (b, members) in blocks.iter().enumerate() {
        let arrangements = permutations(members);
        let mut grown = Vec::with_capacity(perms.len() * arrangements.len());
        for p in &perms {
            for arr in &arrangements {
                let mut q = p.clone();
                for (i, &x) in arr.iter().enumerate() {
                    q[x] = start[b] + i as u8;
                }
                grown.push(q);
            }
        }
        perms = grown;
    }
    perms
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_budgets() {
        assert!(experiment_min_linear_2cnf(0).is_err());
        assert!(experiment_min_linear_2cnf(7).is_err());
    }

    #[test]
    fn single_clause_has_one_class_and_is_satisfiable() {
        let r = experiment_min_linear_2cnf(1).unwrap();
        assert_eq!(r.classes_by_size, vec![1]);
        assert!(r.all_satisfiable);
        assert_eq!(r.checked, 1);
    }

    #[test]
    fn two_clause_census() {
        // By hand: one class of two disjoint clauses, two classes of a
        // shared-variable path (shared values equal or different).
        let r = experiment_min_linear_2cnf(2).unwrap();
        assert_eq!(r.classes_by_size, vec![1, 3]);
        assert!(r.all_satisfiable);
    }

    #[test]
    fn canonical_form_collapses_isomorphic_formulas() {
        // x1!=0 | x2!=1 with x2 renamed and flipped.
        let a = canonical_form(&[(1, 2, 0, 1)]);
        let b = canonical_form(&[(1, 2, 1, 0)]);
        let c = canonical_form(&[(1, 2, 0, 0)]);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn canonical_form_distinguishes_path_sign_classes() {
        // Shared middle variable with equal vs. different forbidden values
        // cannot be mapped onto each other by flips.
        let same = canonical_form(&[(1, 2, 0, 0), (2, 3, 0, 0)]);
        let diff = canonical_form(&[(1, 2, 0, 0), (2, 3, 1, 0)]);
        assert_ne!(same, diff);
    }

    #[test]
    fn canonical_form_is_invariant_under_relabeling() {
        let base = canonical_form(&[(1, 2, 0, 1), (2, 3, 1, 1), (3, 4, 0, 0)]);
        // Reverse the path and flip every variable.
        let relabeled = canonical_form(&[(3, 4, 0, 1), (2, 3, 0, 0), (1, 2, 1, 1)]);
        assert_eq!(base, relabeled);
    }
}
