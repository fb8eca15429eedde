//! Combinatorial descriptions of simple pseudoline arrangements.
//!
//! Pseudolines are labeled `0..n` internally. Files and `Display` output use
//! 1-based labels, matching the usual way these lists are written by hand.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::Tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArrangementError {
    #[error("lines {} and {} are parallel", .0 + 1, .1 + 1)]
    ParallelLines(usize, usize),
    #[error("lines {} and {} meet line {} in a common point", .0 + 1, .1 + 1, .2 + 1)]
    ConcurrentTriple(usize, usize, usize),
    #[error("invalid description: {0}")]
    InvalidDescription(String),
}

/// Per pseudoline, the left-to-right order of its crossings with the others.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CombinatorialDescription {
    lists: Vec<Vec<usize>>,
}

impl CombinatorialDescription {
    /// Wraps 0-based lists without checking them; see [`validate_simple`].
    pub fn new(lists: Vec<Vec<usize>>) -> Self {
        CombinatorialDescription { lists }
    }

    /// Builds a description from 1-based lists. Label 0 is rejected.
    pub fn from_one_based(lists: Vec<Vec<usize>>) -> Result<Self, ArrangementError> {
        let lists = lists
            .into_iter()
            .map(|l| {
                l.into_iter()
                    .map(|j| {
                        j.checked_sub(1).ok_or_else(|| {
                            ArrangementError::InvalidDescription("label 0 is not allowed".into())
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CombinatorialDescription { lists })
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.lists
            .iter()
            .map(|l| l.iter().map(|j| j + 1).collect())
            .collect()
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    pub fn list(&self, i: usize) -> &[usize] {
        &self.lists[i]
    }

    /// Position of `j` in the list of `i`.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.lists[i].iter().position(|&x| x == j)
    }
}

impl fmt::Display for CombinatorialDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.lists.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (k, j) in l.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", j + 1)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Outcome of the structural checks on a description.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimplicityReport {
    pub failures: Vec<String>,
}

impl SimplicityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Structural checks: `n >= 2`, every list is a permutation of the other
/// labels. Realizability is not checked.
pub fn validate_simple(d: &CombinatorialDescription) -> SimplicityReport {
    let n = d.n();
    let mut failures = Vec::new();
    if n < 2 {
        failures.push(format!("need at least 2 pseudolines, got {n}"));
    }
    for (i, list) in d.lists().iter().enumerate() {
        if list.len() + 1 != n {
            failures.push(format!(
                "list {} has length {}, expected {}",
                i + 1,
                list.len(),
                n.saturating_sub(1)
            ));
        }
        let mut seen = vec![false; n];
        for &j in list {
            if j >= n {
                failures.push(format!("list {} mentions unknown line {}", i + 1, j + 1));
            } else if j == i {
                failures.push(format!("list {} contains its own index", i + 1));
            } else if seen[j] {
                failures.push(format!("list {} mentions line {} twice", i + 1, j + 1));
            } else {
                seen[j] = true;
            }
        }
    }
    SimplicityReport { failures }
}

fn require_simple(d: &CombinatorialDescription) -> Result<(), ArrangementError> {
    let report = validate_simple(d);
    if report.passed() {
        Ok(())
    } else {
        Err(ArrangementError::InvalidDescription(report.failures.join("; ")))
    }
}

/// The line `y = a·x + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanLine {
    pub a: f64,
    pub b: f64,
}

impl EuclideanLine {
    pub const fn new(a: f64, b: f64) -> Self {
        EuclideanLine { a, b }
    }

    pub fn y_at(&self, x: f64) -> f64 {
        self.a * x + self.b
    }

    /// x-coordinate of the crossing with `other`; infinite when parallel.
    pub fn crossing_x(&self, other: &EuclideanLine) -> f64 {
        (other.b - self.b) / (self.a - other.a)
    }
}

/// Crossing x-coordinates of every pair, checking for parallel pairs.
fn crossing_table(lines: &[EuclideanLine], tol: Tolerance) -> Result<Vec<Vec<f64>>, ArrangementError> {
    let n = lines.len();
    let mut xs = vec![vec![f64::NAN; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if (lines[i].a - lines[j].a).abs() <= tol.eps_ang {
                return Err(ArrangementError::ParallelLines(i, j));
            }
            let x = lines[i].crossing_x(&lines[j]);
            xs[i][j] = x;
            xs[j][i] = x;
        }
    }
    Ok(xs)
}

/// Relabels `lines` bottom-to-top along a vertical probe left of all
/// crossings. Returns the relabeled lines; `result[k]` is line `k`.
pub fn label_lines(
    lines: &[EuclideanLine],
    tol: Tolerance,
) -> Result<Vec<EuclideanLine>, ArrangementError> {
    let xs = crossing_table(lines, tol)?;
    let n = lines.len();
    let mut min_x = f64::INFINITY;
    for (i, row) in xs.iter().enumerate() {
        for x in row.iter().skip(i + 1) {
            min_x = min_x.min(*x);
        }
    }
    let probe = if min_x.is_finite() { min_x - 1.0 } else { 0.0 };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        lines[i]
            .y_at(probe)
            .total_cmp(&lines[j].y_at(probe))
            .then(lines[j].a.total_cmp(&lines[i].a))
    });
    Ok(order.into_iter().map(|i| lines[i]).collect())
}

/// Description of a line arrangement, after relabeling per [`label_lines`].
pub fn describe(
    lines: &[EuclideanLine],
    tol: Tolerance,
) -> Result<CombinatorialDescription, ArrangementError> {
    let labeled = label_lines(lines, tol)?;
    describe_labeled(&labeled, tol)
}

/// Description of lines whose labels are already their indices.
pub fn describe_labeled(
    lines: &[EuclideanLine],
    tol: Tolerance,
) -> Result<CombinatorialDescription, ArrangementError> {
    let xs = crossing_table(lines, tol)?;
    let n = lines.len();
    let mut lists = Vec::with_capacity(n);
    for i in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        others.sort_by(|&j, &k| xs[i][j].total_cmp(&xs[i][k]));
        for w in others.windows(2) {
            let (x0, x1) = (xs[i][w[0]], xs[i][w[1]]);
            if (x1 - x0).abs() <= tol.eps_len * x0.abs().max(x1.abs()).max(1.0) {
                let mut t = [i, w[0], w[1]];
                t.sort_unstable();
                return Err(ArrangementError::ConcurrentTriple(t[0], t[1], t[2]));
            }
        }
        lists.push(others);
    }
    Ok(CombinatorialDescription { lists })
}

/// An entry of a list extended by the boundary pseudoline γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaEntry {
    Gamma,
    Line(usize),
}

/// A description extended by a pseudoline γ crossing every line twice.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaDescription {
    pub base: CombinatorialDescription,
    pub lists: Vec<Vec<GammaEntry>>,
    /// Cyclic order of the crossings along γ: `0..n` twice.
    pub gamma_cycle: Vec<usize>,
}

pub fn extend_gamma(d: &CombinatorialDescription) -> Result<GammaDescription, ArrangementError> {
    require_simple(d)?;
    let lists = d
        .lists()
        .iter()
        .map(|l| {
            std::iter::once(GammaEntry::Gamma)
                .chain(l.iter().map(|&j| GammaEntry::Line(j)))
                .chain(std::iter::once(GammaEntry::Gamma))
                .collect()
        })
        .collect();
    let n = d.n();
    Ok(GammaDescription {
        base: d.clone(),
        lists,
        gamma_cycle: (0..n).chain(0..n).collect(),
    })
}

/// Number of pairs ordered differently in `a` and `b`, both permutations
/// of the same labels.
fn kendall_distance(a: &[usize], b: &[usize], rank: &mut [usize]) -> usize {
    for (k, &x) in b.iter().enumerate() {
        rank[x] = k;
    }
    let mut count = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if rank[a[i]] > rank[a[j]] {
                count += 1;
            }
        }
    }
    count
}

struct Candidate {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Candidate {
    fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        let b = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        Candidate { a, b }
    }

    fn slopes_ok(&self) -> bool {
        self.a.windows(2).all(|w| w[0] > w[1] + 1e-6)
    }

    /// Sum over lines of the Kendall distance between the candidate's
    /// crossing order and the target order.
    fn score(&self, target: &CombinatorialDescription, scratch: &mut Vec<usize>) -> usize {
        let n = self.a.len();
        let mut total = 0;
        let mut order: Vec<usize> = Vec::with_capacity(n);
        for i in 0..n {
            order.clear();
            order.extend((0..n).filter(|&j| j != i));
            let x = |j: usize| (self.b[j] - self.b[i]) / (self.a[i] - self.a[j]);
            order.sort_by(|&j, &k| x(j).partial_cmp(&x(k)).unwrap_or(Ordering::Equal));
            total += kendall_distance(&order, target.list(i), scratch);
        }
        total
    }

    fn lines(&self) -> Vec<EuclideanLine> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(&a, &b)| EuclideanLine::new(a, b))
            .collect()
    }
}

/// Budgeted search for lines realizing `d`.
///
/// Slopes are kept strictly decreasing so that line `k` always gets label
/// `k`. The search hill-climbs on the total Kendall distance between the
/// candidate's crossing orders and `d`, accepting sideways moves, and
/// restarts from a fresh random candidate after a run without improvement.
/// `None` means the budget ran out and says nothing about realizability.
pub fn realize_search(
    d: &CombinatorialDescription,
    budget: u64,
    seed: u64,
) -> Result<Option<Vec<EuclideanLine>>, ArrangementError> {
    require_simple(d)?;
    let n = d.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch = vec![0; n];
    let tol = Tolerance::default();
    let patience = 200 * n as u64;

    let mut cur = Candidate::random(n, &mut rng);
    let mut score = cur.score(d, &mut scratch);
    let mut stale = 0u64;
    for _ in 0..budget {
        if score == 0 {
            let lines = cur.lines();
            if describe(&lines, tol).as_ref() == Ok(d) {
                return Ok(Some(lines));
            }
        }
        if stale > patience {
            cur = Candidate::random(n, &mut rng);
            score = cur.score(d, &mut scratch);
            stale = 0;
            continue;
        }
        let k = rng.gen_range(0..n);
        let step = 10f64.powf(rng.gen_range(-3.0..0.5)) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let (old_a, old_b) = (cur.a[k], cur.b[k]);
        if rng.gen::<bool>() {
            cur.a[k] += step;
            if !cur.slopes_ok() {
                cur.a[k] = old_a;
                stale += 1;
                continue;
            }
        } else {
            cur.b[k] += step;
        }
        let s = cur.score(d, &mut scratch);
        if s < score {
            score = s;
            stale = 0;
        } else if s == score {
            stale += 1;
        } else {
            cur.a[k] = old_a;
            cur.b[k] = old_b;
            stale += 1;
        }
    }
    if score == 0 {
        let lines = cur.lines();
        if describe(&lines, tol).as_ref() == Ok(d) {
            return Ok(Some(lines));
        }
    }
    Ok(None)
}
