//! Domain model for (k,d)-CSPs.
//!
//! A constraint is a set of disequality literals `x != b` over pairwise
//! distinct variables and forbids exactly one assignment to those variables.
//! A CSP is a duplicate-free collection of such constraints with a common
//! arity `k` and domain `{0, .., d-1}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// 1-based variable identifier.
pub type Var = u32;
/// Domain element, always in `0..d`.
pub type Value = u32;

/// A single disequality `var != value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Var,
    pub value: Value,
}

impl Literal {
    pub fn new(var: Var, value: Value) -> Self {
        Literal { var, value }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}!={}", self.var, self.value)
    }
}

/// A constraint: literals over pairwise distinct variables, kept sorted by
/// variable identifier. Forbids exactly the assignment mapping each variable
/// to its literal's value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    literals: Vec<Literal>,
}

impl Constraint {
    /// Builds a constraint, sorting literals by variable. Rejects zero or
    /// repeated variable identifiers.
    pub fn new(mut literals: Vec<Literal>) -> Result<Self> {
        if literals.iter().any(|l| l.var == 0) {
            return Err(Error::ZeroVariable);
        }
        literals.sort_unstable();
        for w in literals.windows(2) {
            if w[0].var == w[1].var {
                return Err(Error::RepeatedVariable { var: w[0].var });
            }
        }
        Ok(Constraint { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Variables of the constraint, ascending.
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.literals.iter().map(|l| l.var)
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.literals.binary_search_by_key(&var, |l| l.var).is_ok()
    }

    /// `Ok(true)` iff some literal `x != b` has `alpha(x) != b`. Errors on the
    /// first variable `alpha` leaves undefined.
    pub fn satisfied_by(&self, alpha: &Assignment) -> Result<bool> {
        let mut sat = false;
        for l in &self.literals {
            match alpha.get(l.var) {
                None => return Err(Error::MissingVariable(l.var)),
                Some(v) => sat |= v != l.value,
            }
        }
        Ok(sat)
    }

    /// Number of shared variables with `other` (both literal lists are sorted).
    pub fn shared_vars(&self, other: &Constraint) -> usize {
        let (mut i, mut j, mut shared) = (0, 0, 0);
        while i < self.literals.len() && j < other.literals.len() {
            match self.literals[i].var.cmp(&other.literals[j].var) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        shared
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl PartialOrd for Constraint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by sorted variable list first, then by value list.
impl Ord for Constraint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vars()
            .cmp(other.vars())
            .then_with(|| {
                self.literals
                    .iter()
                    .map(|l| l.value)
                    .cmp(other.literals.iter().map(|l| l.value))
            })
    }
}

/// Total map from variables to domain values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<Var, Value>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, Value)>>(pairs: I) -> Self {
        Assignment {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn set(&mut self, var: Var, value: Value) {
        self.values.insert(var, value);
    }

    pub fn get(&self, var: Var) -> Option<Value> {
        self.values.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, Value)> + '_ {
        self.values.iter().map(|(&v, &x)| (v, x))
    }
}

/// Outcome of an `ell`-disjointness check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disjointness {
    Disjoint,
    /// Two constraint indices sharing at least `ell` variables.
    Overlap { first: usize, second: usize },
}

impl Disjointness {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, Disjointness::Disjoint)
    }

    pub fn witness(&self) -> Option<(usize, usize)> {
        match *self {
            Disjointness::Disjoint => None,
            Disjointness::Overlap { first, second } => Some((first, second)),
        }
    }
}

/// The frequent-variable threshold `d^k / (e * d^(ell-1) * k)`.
///
/// Evaluated in 64-bit floating point; comparisons against integer degrees
/// are unambiguous because the threshold is irrational for in-range
/// parameters. Overflows to infinity for huge `k`, in which case no variable
/// counts as frequent.
pub fn frequent_threshold(k: usize, d: u32, ell: usize) -> f64 {
    let d = d as f64;
    d.powi(k as i32) / (std::f64::consts::E * d.powi(ell as i32 - 1) * k as f64)
}

/// A (k,d)-CSP: duplicate-free constraints of arity `k` over domain `{0,..,d-1}`.
///
/// Constraints are stored in canonical order (sorted variable lists, then
/// values), which makes serialization, duplicate detection and the
/// smallest-index resampling rule deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csp {
    k: usize,
    d: u32,
    constraints: Vec<Constraint>,
    vars: Vec<Var>,
}

impl Csp {
    pub fn new(k: usize, d: u32, mut constraints: Vec<Constraint>) -> Result<Self> {
        if d < 2 {
            return Err(Error::DomainTooSmall(d));
        }
        for (index, c) in constraints.iter().enumerate() {
            if c.len() != k {
                return Err(Error::ArityMismatch {
                    index,
                    len: c.len(),
                    k,
                });
            }
            for l in c.literals() {
                if l.value >= d {
                    return Err(Error::ValueOutOfDomain { value: l.value, d });
                }
            }
        }
        constraints.sort_unstable();
        for w in constraints.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateConstraint(w[0].to_string()));
            }
        }
        let vars: BTreeSet<Var> = constraints.iter().flat_map(|c| c.vars()).collect();
        Ok(Csp {
            k,
            d,
            constraints,
            vars: vars.into_iter().collect(),
        })
    }

    /// Convenience builder from `(var, value)` rows.
    pub fn from_rows(k: usize, d: u32, rows: &[&[(Var, Value)]]) -> Result<Self> {
        let constraints = rows
            .iter()
            .map(|row| Constraint::new(row.iter().map(|&(v, b)| Literal::new(v, b)).collect()))
            .collect::<Result<Vec<_>>>()?;
        Csp::new(k, d, constraints)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Distinct variables mentioned anywhere, ascending.
    pub fn variables(&self) -> &[Var] {
        &self.vars
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    fn check_total(&self, alpha: &Assignment) -> Result<()> {
        for &v in &self.vars {
            if alpha.get(v).is_none() {
                return Err(Error::MissingVariable(v));
            }
        }
        Ok(())
    }

    /// True iff every constraint has a satisfied literal. `alpha` must be
    /// total on the CSP's variables.
    pub fn evaluate(&self, alpha: &Assignment) -> Result<bool> {
        self.check_total(alpha)?;
        for c in &self.constraints {
            if !c.satisfied_by(alpha)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of constraints whose literals are all falsified by `alpha`.
    pub fn violated_constraints(&self, alpha: &Assignment) -> Result<Vec<usize>> {
        self.check_total(alpha)?;
        let mut out = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            if !c.satisfied_by(alpha)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Number of constraints in which `var` occurs.
    pub fn degree(&self, var: Var) -> usize {
        self.constraints
            .iter()
            .filter(|c| c.contains_var(var))
            .count()
    }

    /// Degree of every mentioned variable.
    pub fn degrees(&self) -> BTreeMap<Var, usize> {
        let mut deg: BTreeMap<Var, usize> = self.vars.iter().map(|&v| (v, 0)).collect();
        for c in &self.constraints {
            for v in c.vars() {
                *deg.get_mut(&v).expect("vars cache covers all constraints") += 1;
            }
        }
        deg
    }

    /// Checks that no two distinct constraints share `ell` or more variables.
    pub fn check_l_disjoint(&self, ell: usize) -> Result<Disjointness> {
        if ell < 2 || ell > self.k {
            return Err(Error::EllOutOfRange { ell, k: self.k });
        }
        // An ell-overlap is exactly a shared ell-subset of variables, and in
        // an ell-disjoint family every such subset belongs to at most one
        // constraint, so hashing subsets decides the check in one pass.
        if binomial_small(self.k, ell).is_some() {
            let mut seen: HashMap<Vec<Var>, usize> = HashMap::new();
            for (i, c) in self.constraints.iter().enumerate() {
                let vars: Vec<Var> = c.vars().collect();
                let mut overlap = None;
                for subset in SubsetIter::new(&vars, ell) {
                    if let Some(&j) = seen.get(&subset) {
                        overlap.get_or_insert((j, i));
                    }
                }
                if let Some((first, second)) = overlap {
                    return Ok(Disjointness::Overlap { first, second });
                }
                for subset in SubsetIter::new(&vars, ell) {
                    seen.insert(subset, i);
                }
            }
            return Ok(Disjointness::Disjoint);
        }
        // C(k, ell) too large to enumerate; fall back to pairwise counting.
        for i in 0..self.constraints.len() {
            for j in (i + 1)..self.constraints.len() {
                if self.constraints[i].shared_vars(&self.constraints[j]) >= ell {
                    return Ok(Disjointness::Overlap {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Disjointness::Disjoint)
    }

    /// Variables with degree strictly above `frequent_threshold(k, d, ell)`.
    pub fn frequent_variables(&self, ell: usize) -> Result<BTreeSet<Var>> {
        if ell < 2 || ell > self.k {
            return Err(Error::EllOutOfRange { ell, k: self.k });
        }
        let threshold = frequent_threshold(self.k, self.d, ell);
        Ok(self
            .degrees()
            .into_iter()
            .filter(|&(_, deg)| deg as f64 > threshold)
            .map(|(v, _)| v)
            .collect())
    }

    /// Double-counting identity: sum of constraint sizes equals sum of degrees.
    pub fn degree_sum_check(&self) -> bool {
        let lhs: usize = self.constraints.iter().map(|c| c.len()).sum();
        let rhs: usize = self.degrees().values().sum();
        lhs == rhs
    }
}

fn binomial_small(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let mut acc: u64 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.checked_mul((n - i) as u64)? / (i as u64 + 1);
        if acc > 10_000 {
            return None;
        }
    }
    Some(acc)
}

/// Iterates the `ell`-subsets of a sorted slice in lexicographic order.
struct SubsetIter<'a> {
    items: &'a [Var],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> SubsetIter<'a> {
    fn new(items: &'a [Var], ell: usize) -> Self {
        SubsetIter {
            items,
            idx: (0..ell).collect(),
            done: ell > items.len(),
        }
    }
}

impl Iterator for SubsetIter<'_> {
    type Item = Vec<Var>;

    fn next(&mut self) -> Option<Vec<Var>> {
        if self.done {
            return None;
        }
        let out: Vec<Var> = self.idx.iter().map(|&i| self.items[i]).collect();
        let ell = self.idx.len();
        if ell == 0 {
            self.done = true;
            return Some(out);
        }
        let mut i = ell;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] + 1 <= self.items.len() - (ell - i) {
                self.idx[i] += 1;
                for j in (i + 1)..ell {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn lit(v: Var, b: Value) -> Literal {
        Literal::new(v, b)
    }

    #[test]
    fn constraint_rejects_repeated_variable() {
        let err = Constraint::new(vec![lit(1, 0), lit(1, 1)]).unwrap_err();
        assert_eq!(err, Error::RepeatedVariable { var: 1 });
    }

    #[test]
    fn constraint_sorts_literals() {
        let c = Constraint::new(vec![lit(3, 1), lit(1, 0)]).unwrap();
        assert_eq!(c.literals(), &[lit(1, 0), lit(3, 1)]);
    }

    #[test]
    fn csp_rejects_duplicates_and_bad_values() {
        let c = |a, b| Constraint::new(vec![lit(1, a), lit(2, b)]).unwrap();
        assert!(matches!(
            Csp::new(2, 2, vec![c(0, 0), c(0, 0)]),
            Err(Error::DuplicateConstraint(_))
        ));
        assert_eq!(
            Csp::new(2, 2, vec![c(0, 3)]),
            Err(Error::ValueOutOfDomain { value: 3, d: 2 })
        );
        assert_eq!(Csp::new(2, 1, vec![]), Err(Error::DomainTooSmall(1)));
        assert!(matches!(
            Csp::new(3, 2, vec![c(0, 0)]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn empty_csp_is_vacuously_satisfied() {
        let csp = Csp::new(2, 2, vec![]).unwrap();
        assert!(csp.evaluate(&Assignment::new()).unwrap());
        assert!(csp.violated_constraints(&Assignment::new()).unwrap().is_empty());
        assert!(csp.degree_sum_check());
    }

    #[test]
    fn one_satisfied_literal_suffices() {
        let csp = Csp::from_rows(2, 2, &[&[(1, 0), (2, 0)]]).unwrap();
        let alpha = Assignment::from_pairs([(1, 1), (2, 0)]);
        assert!(csp.evaluate(&alpha).unwrap());
    }

    #[test]
    fn unique_forbidden_point_is_violated() {
        let csp = Csp::from_rows(2, 2, &[&[(1, 1), (2, 1)]]).unwrap();
        let alpha = Assignment::from_pairs([(1, 1), (2, 1)]);
        assert_eq!(csp.violated_constraints(&alpha).unwrap(), vec![0]);
        assert!(!csp.evaluate(&alpha).unwrap());
    }

    #[test]
    fn missing_variable_is_reported() {
        let csp = Csp::from_rows(2, 2, &[&[(1, 0), (2, 0)]]).unwrap();
        let alpha = Assignment::from_pairs([(1, 1)]);
        assert_eq!(csp.evaluate(&alpha), Err(Error::MissingVariable(2)));
    }

    #[test]
    fn six_clause_formula_is_unsatisfied_by_all_16_assignments() {
        let csp = fixtures::six_clause_linear();
        for bits in 0..16u32 {
            let alpha = Assignment::from_pairs((1..=4).map(|v| (v, (bits >> (v - 1)) & 1)));
            assert!(!csp.evaluate(&alpha).unwrap(), "assignment {bits:04b}");
        }
    }

    #[test]
    fn six_clause_all_false_violates_exactly_u_or_w() {
        let csp = fixtures::six_clause_linear();
        let alpha = Assignment::from_pairs((1..=4).map(|v| (v, 0)));
        let violated = csp.violated_constraints(&alpha).unwrap();
        // The only violated clause is {u, w}, i.e. {x1!=0, x3!=0}.
        let expect = csp
            .constraints()
            .iter()
            .position(|c| c.vars().collect::<Vec<_>>() == [1, 3])
            .unwrap();
        assert_eq!(violated, vec![expect]);
    }

    #[test]
    fn degree_counts_occurrences() {
        let csp = Csp::from_rows(2, 2, &[&[(1, 0), (2, 1)], &[(1, 1), (3, 0)]]).unwrap();
        assert_eq!(csp.degree(1), 2);
        assert_eq!(csp.degree(2), 1);
        assert_eq!(csp.degree(99), 0);
        let six = fixtures::six_clause_linear();
        assert_eq!(six.degree(1), 3);
        assert!(six.degree_sum_check());
        assert_eq!(six.constraints().iter().map(|c| c.len()).sum::<usize>(), 12);
    }

    #[test]
    fn six_clause_formula_is_linear() {
        let csp = fixtures::six_clause_linear();
        assert_eq!(csp.check_l_disjoint(2).unwrap(), Disjointness::Disjoint);
    }

    #[test]
    fn complete_formula_shares_all_variables() {
        let csp = fixtures::complete_formula(3, 2).unwrap();
        let verdict = csp.check_l_disjoint(2).unwrap();
        assert!(verdict.witness().is_some());
    }

    #[test]
    fn single_constraint_is_disjoint() {
        let csp = Csp::from_rows(2, 2, &[&[(1, 0), (2, 0)]]).unwrap();
        assert!(csp.check_l_disjoint(2).unwrap().is_disjoint());
    }

    #[test]
    fn ell_out_of_range_is_rejected() {
        let csp = Csp::from_rows(2, 2, &[&[(1, 0), (2, 0)]]).unwrap();
        assert_eq!(
            csp.check_l_disjoint(3),
            Err(Error::EllOutOfRange { ell: 3, k: 2 })
        );
        assert_eq!(
            csp.frequent_variables(1).unwrap_err(),
            Error::EllOutOfRange { ell: 1, k: 2 }
        );
    }

    #[test]
    fn frequent_threshold_matches_hand_values() {
        let t22 = frequent_threshold(2, 2, 2);
        assert!((t22 - 4.0 / (4.0 * std::f64::consts::E)).abs() < 1e-15);
        assert!((t22 - 0.3679).abs() < 1e-4);
        let t10 = frequent_threshold(10, 2, 2);
        assert!((t10 - 1024.0 / (20.0 * std::f64::consts::E)).abs() < 1e-12);
        assert!((t10 - 18.84).abs() < 5e-3);
    }

    #[test]
    fn frequent_variables_on_fixture_and_empty() {
        let empty = Csp::new(2, 2, vec![]).unwrap();
        assert!(empty.frequent_variables(2).unwrap().is_empty());
        // Threshold ~0.368, so every occurring variable is frequent.
        let six = fixtures::six_clause_linear();
        let freq = six.frequent_variables(2).unwrap();
        assert_eq!(freq.into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn frequent_cutoff_at_degree_19_for_k10() {
        // Degree 18 is below the (10,2,2) threshold of ~18.84, degree 19 above.
        let t = frequent_threshold(10, 2, 2);
        assert!(18.0 < t);
        assert!(19.0 > t);
    }

    #[test]
    fn canonical_order_sorts_by_vars_then_values() {
        let a = Constraint::new(vec![lit(1, 1), lit(2, 0)]).unwrap();
        let b = Constraint::new(vec![lit(1, 0), lit(3, 0)]).unwrap();
        let csp = Csp::new(2, 2, vec![b.clone(), a.clone()]).unwrap();
        assert_eq!(csp.constraints(), &[a, b]);
    }

    #[test]
    fn subset_iter_enumerates_pairs() {
        let items = [1u32, 2, 3];
        let subs: Vec<Vec<Var>> = SubsetIter::new(&items, 2).collect();
        assert_eq!(subs, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
