//! Exact linear feasibility over the rationals.
//!
//! Equalities are eliminated first by Gauss-Jordan reduction, pivoting on the
//! highest-index variable of each row so that every eliminated variable is an
//! affine function of *lower-index* free variables. The remaining
//! inequalities are projected by Fourier–Motzkin elimination, last variable
//! first, and every intermediate projection is kept. Back-substitution then
//! walks the free variables in increasing index order and takes the smallest
//! admissible value at each step, which yields the lexicographically minimal
//! point of the polyhedron.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `coefficients · x  (relation)  bound`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearConstraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub bound: Rational,
}

impl LinearConstraint {
    pub fn new(coefficients: Vec<Rational>, relation: Relation, bound: Rational) -> Self {
        Self {
            coefficients,
            relation,
            bound,
        }
    }

    pub fn le(coefficients: Vec<Rational>, bound: Rational) -> Self {
        Self::new(coefficients, Relation::Le, bound)
    }

    pub fn ge(coefficients: Vec<Rational>, bound: Rational) -> Self {
        Self::new(coefficients, Relation::Ge, bound)
    }

    pub fn eq(coefficients: Vec<Rational>, bound: Rational) -> Self {
        Self::new(coefficients, Relation::Eq, bound)
    }

    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs: Rational = self.coefficients.iter().zip(point).map(|(a, x)| a * x).sum();
        match self.relation {
            Relation::Le => lhs <= self.bound,
            Relation::Eq => lhs == self.bound,
            Relation::Ge => lhs >= self.bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityResult {
    /// The lexicographically minimal feasible point.
    Feasible(Vec<Rational>),
    Infeasible,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            FeasibilityResult::Feasible(w) => Some(w),
            FeasibilityResult::Infeasible => None,
        }
    }
}

/// `coeffs · x <= bound`
#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<Rational>,
    bound: Rational,
}

/// Pivot variable `x_p = rhs - Σ coeffs[q] x_q` (only lower-index free `q`).
struct Pivot {
    var: usize,
    coeffs: Vec<Rational>,
    rhs: Rational,
}

pub fn solve_feasibility(vars: usize, constraints: &[LinearConstraint]) -> Result<FeasibilityResult> {
    if vars == 0 {
        return Err(Error::MalformedSystem("at least one variable is required".into()));
    }
    if let Some(c) = constraints.iter().find(|c| c.coefficients.len() != vars) {
        return Err(Error::MalformedSystem(format!(
            "constraint has {} coefficients, system has {vars} variables",
            c.coefficients.len()
        )));
    }

    let mut equalities = Vec::new();
    let mut inequalities = Vec::new();
    for c in constraints {
        match c.relation {
            Relation::Eq => equalities.push(Row {
                coeffs: c.coefficients.clone(),
                bound: c.bound.clone(),
            }),
            Relation::Le => inequalities.push(Row {
                coeffs: c.coefficients.clone(),
                bound: c.bound.clone(),
            }),
            Relation::Ge => inequalities.push(Row {
                coeffs: c.coefficients.iter().map(|a| -a).collect(),
                bound: -&c.bound,
            }),
        }
    }

    let Some(pivots) = reduce_equalities(vars, equalities) else {
        return Ok(FeasibilityResult::Infeasible);
    };
    let mut is_pivot = vec![false; vars];
    for p in &pivots {
        is_pivot[p.var] = true;
    }
    let free: Vec<usize> = (0..vars).filter(|&v| !is_pivot[v]).collect();

    let projected: Vec<Row> = inequalities.iter().map(|row| substitute(row, &pivots, &free)).collect();

    let Some(chain) = project_chain(projected, free.len()) else {
        return Ok(FeasibilityResult::Infeasible);
    };

    let mut free_values: Vec<Rational> = Vec::with_capacity(free.len());
    for (j, &var) in free.iter().enumerate() {
        let mut lower: Option<Rational> = None;
        for row in &chain[j + 1] {
            let a = &row.coeffs[j];
            if !a.is_negative() {
                continue;
            }
            let rest: Rational = row.coeffs[..j].iter().zip(&free_values).map(|(c, x)| c * x).sum();
            let bound = (&row.bound - rest) / a;
            if lower.as_ref().is_none_or(|l| &bound > l) {
                lower = Some(bound);
            }
        }
        match lower {
            Some(x) => free_values.push(x),
            None => return Err(Error::UnboundedLexMin { variable: var }),
        }
    }

    let mut point = vec![Rational::zero(); vars];
    for (&var, x) in free.iter().zip(&free_values) {
        point[var] = x.clone();
    }
    // Pivot rows only reference lower-index free variables, all fixed now.
    for p in &pivots {
        let dependent: Rational = p.coeffs.iter().zip(&point).map(|(c, x)| c * x).sum();
        point[p.var] = &p.rhs - dependent;
    }
    debug_assert!(constraints.iter().all(|c| c.is_satisfied_by(&point)));
    Ok(FeasibilityResult::Feasible(point))
}

/// Gauss-Jordan reduction pivoting from the last column. Returns `None` when
/// the equalities are inconsistent.
fn reduce_equalities(vars: usize, mut rows: Vec<Row>) -> Option<Vec<Pivot>> {
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (var, row index)
    let mut used = vec![false; rows.len()];
    for col in (0..vars).rev() {
        let Some(r) = (0..rows.len()).find(|&r| !used[r] && !rows[r].coeffs[col].is_zero()) else {
            continue;
        };
        used[r] = true;
        let lead = rows[r].coeffs[col].clone();
        for a in rows[r].coeffs.iter_mut() {
            *a /= &lead;
        }
        rows[r].bound /= &lead;
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row.coeffs[col].is_zero() {
                continue;
            }
            let factor = row.coeffs[col].clone();
            for (a, p) in row.coeffs.iter_mut().zip(&pivot_row.coeffs) {
                *a -= &factor * p;
            }
            row.bound -= &factor * &pivot_row.bound;
        }
        pivot_rows.push((col, r));
    }
    for (r, row) in rows.iter().enumerate() {
        if !used[r] && !row.bound.is_zero() {
            return None;
        }
    }
    Some(
        pivot_rows
            .into_iter()
            .map(|(var, r)| {
                let mut coeffs = rows[r].coeffs.clone();
                coeffs[var] = Rational::zero();
                Pivot {
                    var,
                    coeffs,
                    rhs: rows[r].bound.clone(),
                }
            })
            .collect(),
    )
}

/// Rewrites an inequality over all variables as one over the free variables.
fn substitute(row: &Row, pivots: &[Pivot], free: &[usize]) -> Row {
    let mut full = row.coeffs.clone();
    let mut bound = row.bound.clone();
    for p in pivots {
        let a = full[p.var].clone();
        if a.is_zero() {
            continue;
        }
        full[p.var] = Rational::zero();
        bound -= &a * &p.rhs;
        for (c, e) in full.iter_mut().zip(&p.coeffs) {
            if !e.is_zero() {
                *c -= &a * e;
            }
        }
    }
    Row {
        coeffs: free.iter().map(|&v| full[v].clone()).collect(),
        bound,
    }
}

/// `chain[j]` is the projection onto the first `j` free variables. Returns
/// `None` if some projection contains a violated constant row.
fn project_chain(rows: Vec<Row>, dims: usize) -> Option<Vec<Vec<Row>>> {
    let mut chain: Vec<Vec<Row>> = vec![Vec::new(); dims + 1];
    chain[dims] = normalize(rows, dims)?;
    for j in (0..dims).rev() {
        let current = &chain[j + 1];
        let mut next = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for row in current {
            let a = &row.coeffs[j];
            if a.is_zero() {
                next.push(Row {
                    coeffs: row.coeffs[..j].to_vec(),
                    bound: row.bound.clone(),
                });
            } else if a.is_positive() {
                pos.push(row);
            } else {
                neg.push(row);
            }
        }
        for p in &pos {
            let ap = &p.coeffs[j];
            for q in &neg {
                let aq = -&q.coeffs[j];
                // aq * p + ap * q cancels variable j
                let coeffs = (0..j).map(|k| &aq * &p.coeffs[k] + ap * &q.coeffs[k]).collect();
                let bound = &aq * &p.bound + ap * &q.bound;
                next.push(Row { coeffs, bound });
            }
        }
        chain[j] = normalize(next, j)?;
    }
    Some(chain)
}

/// Drops trivially true constant rows, scales each row so its first nonzero
/// coefficient has magnitude one, and keeps the tightest of parallel rows.
fn normalize(rows: Vec<Row>, dims: usize) -> Option<Vec<Row>> {
    let mut tightest: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for mut row in rows {
        debug_assert_eq!(row.coeffs.len(), dims);
        let Some(lead) = row.coeffs.iter().find(|a| !a.is_zero()).map(|a| a.abs()) else {
            if row.bound.is_negative() {
                return None;
            }
            continue;
        };
        if lead != Rational::from_integer(1.into()) {
            for a in row.coeffs.iter_mut() {
                *a /= &lead;
            }
            row.bound /= &lead;
        }
        match tightest.get_mut(&row.coeffs) {
            Some(b) if *b <= row.bound => {}
            Some(b) => *b = row.bound,
            None => {
                tightest.insert(row.coeffs, row.bound);
            }
        }
    }
    Some(
        tightest
            .into_iter()
            .map(|(coeffs, bound)| Row { coeffs, bound })
            .collect(),
    )
}
