//! Assignment constraints and the exact constrained clustering cost
//! `cost_z(P, C, Gamma)`, solved as a min-cost transportation problem.
//!
//! Dense instances go through a transportation simplex (north-west-corner
//! start, MODI improvement, Bland fallback on degeneracy stalls); instances
//! past [`SIMPLEX_CELL_LIMIT`] cells use successive shortest paths on the
//! bipartite graph so the dense tableau never materializes.

use crate::dataset::{powz, WeightedPointSet};
use crate::error::{Error, Result};
use crate::metric::PointId;
use crate::rng::rng_for;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Above this many `n * k` cells the solver switches away from the dense
/// simplex tableau.
pub const SIMPLEX_CELL_LIMIT: usize = 1_000_000;

/// Inputs whose mass imbalance is within this relative tolerance are
/// renormalized; anything worse is rejected.
pub const MASS_BALANCE_TOL: f64 = 1e-6;

/// Per-center masses `Gamma(c)`; the paired center list is passed alongside
/// wherever the constraint is used.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssignmentConstraint {
    masses: Vec<f64>,
}

impl AssignmentConstraint {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        for (i, &m) in masses.iter().enumerate() {
            if m < 0.0 || !m.is_finite() {
                return Err(Error::NegativeWeight { index: i, weight: m });
            }
        }
        if masses.is_empty() {
            return Err(Error::EmptyCenters);
        }
        Ok(Self { masses })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            masses: self.masses.iter().map(|m| m * lambda).collect(),
        }
    }

    /// `Gamma(c)` = total weight of the points whose nearest center is `c`,
    /// ties to the lowest center index. The unconstrained optimum is attained
    /// under this constraint.
    pub fn induced(p: &WeightedPointSet, centers: &[PointId]) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::EmptyCenters);
        }
        let mut masses = vec![0.0; centers.len()];
        for i in 0..p.len() {
            let (ci, _) = p.nearest_center(i, centers)?;
            masses[ci] += p.weight(i);
        }
        Ok(Self { masses })
    }

    /// Symmetric Dirichlet(1) draw scaled to `total`; deterministic in the
    /// seed.
    pub fn random(k: usize, total: f64, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyCenters);
        }
        if total <= 0.0 {
            return Err(Error::ZeroWeight);
        }
        let mut rng = rng_for(seed, &[0x6469_7269]);
        let raw: Vec<f64> = (0..k)
            .map(|_| -(rng.random::<f64>().max(1e-300)).ln())
            .collect();
        let sum: f64 = raw.iter().sum();
        Ok(Self {
            masses: raw.into_iter().map(|e| e / sum * total).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TransportEntry {
    pub point: usize,
    pub center: usize,
    pub mass: f64,
}

/// Optimal fractional assignment and its objective `sum sigma * dist^z`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransportPlan {
    pub entries: Vec<TransportEntry>,
    pub objective: f64,
}

impl TransportPlan {
    pub fn row_sums(&self, n: usize) -> Vec<f64> {
        let mut sums = vec![0.0; n];
        for e in &self.entries {
            sums[e.point] += e.mass;
        }
        sums
    }

    pub fn col_sums(&self, k: usize) -> Vec<f64> {
        let mut sums = vec![0.0; k];
        for e in &self.entries {
            sums[e.center] += e.mass;
        }
        sums
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportMethod {
    /// Simplex up to [`SIMPLEX_CELL_LIMIT`] cells, shortest paths beyond.
    Auto,
    Simplex,
    ShortestPaths,
}

/// Minimum-cost fractional assignment of `P` onto `centers` delivering the
/// masses prescribed by `gamma`. Deterministic given identical input order.
pub fn solve_transport(
    p: &WeightedPointSet,
    centers: &[PointId],
    gamma: &AssignmentConstraint,
    z: f64,
) -> Result<TransportPlan> {
    solve_transport_with(p, centers, gamma, z, TransportMethod::Auto)
}

pub fn solve_transport_with(
    p: &WeightedPointSet,
    centers: &[PointId],
    gamma: &AssignmentConstraint,
    z: f64,
    method: TransportMethod,
) -> Result<TransportPlan> {
    if centers.is_empty() {
        return Err(Error::EmptyCenters);
    }
    if gamma.len() != centers.len() {
        return Err(Error::Config(format!(
            "constraint has {} masses for {} centers",
            gamma.len(),
            centers.len()
        )));
    }
    let w_total = p.total_weight();
    let g_total = gamma.total();
    if (g_total - w_total).abs() > MASS_BALANCE_TOL * w_total {
        return Err(Error::MassMismatch {
            constraint: g_total,
            weight: w_total,
        });
    }
    let demands: Vec<f64> = gamma.scaled(w_total / g_total).masses;
    let supplies: Vec<f64> = p.weights().to_vec();

    let n = p.len();
    let k = centers.len();
    let use_simplex = match method {
        TransportMethod::Simplex => true,
        TransportMethod::ShortestPaths => false,
        TransportMethod::Auto => n.saturating_mul(k) <= SIMPLEX_CELL_LIMIT,
    };
    if use_simplex {
        let mut cost = vec![0.0; n * k];
        for i in 0..n {
            for (j, &c) in centers.iter().enumerate() {
                cost[i * k + j] = powz(p.dist(i, c)?, z);
            }
        }
        Simplex::new(n, k, cost, supplies, demands).solve()
    } else {
        let cost = |i: usize, j: usize| -> Result<f64> { Ok(powz(p.dist(i, centers[j])?, z)) };
        shortest_paths_solve(n, k, &cost, supplies, demands)
    }
}

// ---------------------------------------------------------------------------
// Transportation simplex
// ---------------------------------------------------------------------------

struct Simplex {
    n: usize,
    k: usize,
    cost: Vec<f64>,
    flow: Vec<f64>,
    basic: Vec<bool>,
    row_cells: Vec<Vec<u32>>,
    col_cells: Vec<Vec<u32>>,
    supplies: Vec<f64>,
    demands: Vec<f64>,
    tol: f64,
}

impl Simplex {
    fn new(n: usize, k: usize, cost: Vec<f64>, supplies: Vec<f64>, demands: Vec<f64>) -> Self {
        let scale = cost.iter().cloned().fold(0.0f64, f64::max);
        Self {
            n,
            k,
            cost,
            flow: vec![0.0; n * k],
            basic: vec![false; n * k],
            row_cells: vec![Vec::new(); n],
            col_cells: vec![Vec::new(); k],
            supplies,
            demands,
            tol: 1e-12 * (1.0 + scale),
        }
    }

    #[inline]
    fn cell(&self, i: usize, j: usize) -> u32 {
        (i * self.k + j) as u32
    }

    fn add_basic(&mut self, i: usize, j: usize, f: f64) {
        let c = self.cell(i, j);
        self.basic[c as usize] = true;
        self.flow[c as usize] = f;
        self.row_cells[i].push(c);
        self.col_cells[j].push(c);
    }

    fn drop_basic(&mut self, c: u32) {
        self.basic[c as usize] = false;
        self.flow[c as usize] = 0.0;
        let (i, j) = ((c as usize) / self.k, (c as usize) % self.k);
        self.row_cells[i].retain(|&x| x != c);
        self.col_cells[j].retain(|&x| x != c);
    }

    /// North-west-corner start: exactly n + k - 1 basic cells, zero cells
    /// inserted on simultaneous exhaustion.
    fn northwest_start(&mut self) {
        let mut a = self.supplies.clone();
        let mut b = self.demands.clone();
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            let f = if i == self.n - 1 && j == self.k - 1 {
                a[i].max(0.0)
            } else {
                a[i].min(b[j])
            };
            self.add_basic(i, j, f.max(0.0));
            a[i] -= f;
            b[j] -= f;
            if i == self.n - 1 && j == self.k - 1 {
                break;
            }
            if a[i] <= 0.0 && i < self.n - 1 {
                i += 1;
            } else if j < self.k - 1 {
                j += 1;
            } else {
                i += 1;
            }
        }
        debug_assert_eq!(
            self.row_cells.iter().map(Vec::len).sum::<usize>(),
            self.n + self.k - 1
        );
    }

    /// Duals from the basis tree: u_i + v_j = c_ij on basic cells.
    fn duals(&self) -> (Vec<f64>, Vec<f64>) {
        let mut u = vec![f64::NAN; self.n];
        let mut v = vec![f64::NAN; self.k];
        u[0] = 0.0;
        // nodes: rows 0..n, cols n..n+k
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            if node < self.n {
                for &c in &self.row_cells[node] {
                    let j = (c as usize) % self.k;
                    if v[j].is_nan() {
                        v[j] = self.cost[c as usize] - u[node];
                        stack.push(self.n + j);
                    }
                }
            } else {
                let j = node - self.n;
                for &c in &self.col_cells[j] {
                    let i = (c as usize) / self.k;
                    if u[i].is_nan() {
                        u[i] = self.cost[c as usize] - v[j];
                        stack.push(i);
                    }
                }
            }
        }
        (u, v)
    }

    /// Entering cell under Dantzig (most negative reduced cost) or Bland
    /// (first negative) pricing.
    fn entering(&self, u: &[f64], v: &[f64], bland: bool) -> Option<u32> {
        let mut best: Option<(f64, u32)> = None;
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                let c = self.cell(i, j);
                if self.basic[c as usize] {
                    continue;
                }
                let rc = self.cost[c as usize] - ui - vj;
                if rc < -self.tol {
                    if bland {
                        return Some(c);
                    }
                    if best.is_none_or(|(b, _)| rc < b) {
                        best = Some((rc, c));
                    }
                }
            }
        }
        best.map(|(_, c)| c)
    }

    /// Unique alternating cycle closed by the entering cell: path through the
    /// basis tree from the entering column back to the entering row.
    fn cycle(&self, enter: u32) -> Vec<u32> {
        let ei = (enter as usize) / self.k;
        let ej = (enter as usize) % self.k;
        // BFS over tree nodes from col ej to row ei, remembering the cell used.
        let total = self.n + self.k;
        let mut prev_cell = vec![u32::MAX; total];
        let mut prev_node = vec![usize::MAX; total];
        let mut seen = vec![false; total];
        let start = self.n + ej;
        let goal = ei;
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            if node == goal {
                break;
            }
            let cells = if node < self.n {
                &self.row_cells[node]
            } else {
                &self.col_cells[node - self.n]
            };
            for &c in cells {
                let other = if node < self.n {
                    self.n + (c as usize) % self.k
                } else {
                    (c as usize) / self.k
                };
                if !seen[other] {
                    seen[other] = true;
                    prev_cell[other] = c;
                    prev_node[other] = node;
                    queue.push_back(other);
                }
            }
        }
        debug_assert!(seen[goal], "basis tree must connect entering endpoints");
        let mut cells = vec![enter];
        let mut node = goal;
        while node != start {
            cells.push(prev_cell[node]);
            node = prev_node[node];
        }
        cells
    }

    fn solve(mut self) -> Result<TransportPlan> {
        self.northwest_start();
        let mut bland = false;
        let mut stall = 0usize;
        let max_pivots = 1_000_000usize.max(64 * (self.n + self.k));
        for _ in 0..max_pivots {
            let (u, v) = self.duals();
            let Some(enter) = self.entering(&u, &v, bland) else {
                return Ok(self.plan());
            };
            let cycle = self.cycle(enter);
            // Even positions (0-based) gain flow, odd positions lose it.
            let mut delta = f64::INFINITY;
            let mut leave = u32::MAX;
            for (pos, &c) in cycle.iter().enumerate() {
                if pos % 2 == 1 {
                    let f = self.flow[c as usize];
                    if f < delta - self.tol || (f <= delta + self.tol && c < leave) {
                        delta = f.min(delta);
                        leave = c;
                    }
                }
            }
            debug_assert!(leave != u32::MAX);
            if delta <= self.tol {
                stall += 1;
                if stall > 64 {
                    bland = true;
                }
            } else {
                stall = 0;
            }
            for (pos, &c) in cycle.iter().enumerate() {
                if pos % 2 == 0 {
                    self.flow[c as usize] += delta;
                } else {
                    self.flow[c as usize] = (self.flow[c as usize] - delta).max(0.0);
                }
            }
            let (ei, ej) = ((enter as usize) / self.k, (enter as usize) % self.k);
            let entering_flow = self.flow[enter as usize];
            self.drop_basic(leave);
            self.add_basic(ei, ej, entering_flow);
        }
        Err(Error::Config(
            "transportation simplex did not converge".into(),
        ))
    }

    fn plan(&self) -> TransportPlan {
        let mut entries = Vec::new();
        let mut objective = 0.0;
        for i in 0..self.n {
            for j in 0..self.k {
                let c = self.cell(i, j) as usize;
                if self.basic[c] && self.flow[c] > 0.0 {
                    entries.push(TransportEntry {
                        point: i,
                        center: j,
                        mass: self.flow[c],
                    });
                    objective += self.flow[c] * self.cost[c];
                }
            }
        }
        TransportPlan { entries, objective }
    }
}

// ---------------------------------------------------------------------------
// Successive shortest paths (sparse fallback)
// ---------------------------------------------------------------------------

fn shortest_paths_solve(
    n: usize,
    k: usize,
    cost: &dyn Fn(usize, usize) -> Result<f64>,
    supplies: Vec<f64>,
    demands: Vec<f64>,
) -> Result<TransportPlan> {
    use std::cmp::Reverse;
    use std::collections::{BinaryHeap, HashMap};

    #[derive(PartialEq)]
    struct D(f64);
    impl Eq for D {}
    impl PartialOrd for D {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for D {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&other.0)
        }
    }

    let total: f64 = supplies.iter().sum();
    let tol = 1e-12 * (1.0 + total);
    let mut rem_supply = supplies;
    let mut rem_demand = demands;
    let mut flow: HashMap<(u32, u32), f64> = HashMap::new();
    // flows grouped by center so reverse arcs enumerate cheaply
    let mut center_flows: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut pot = vec![0.0f64; n + k]; // points then centers
    let max_rounds = 1000 + 100 * (n + k);

    for _ in 0..max_rounds {
        if rem_supply.iter().all(|&s| s <= tol) {
            break;
        }
        // Dijkstra from all points with remaining supply.
        let mut dist = vec![f64::INFINITY; n + k];
        let mut parent = vec![usize::MAX; n + k];
        let mut heap = BinaryHeap::new();
        for (i, &s) in rem_supply.iter().enumerate() {
            if s > tol {
                dist[i] = 0.0;
                heap.push(Reverse((D(0.0), i)));
            }
        }
        while let Some(Reverse((D(d), node))) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            if node < n {
                for j in 0..k {
                    let rc = cost(node, j)? + pot[node] - pot[n + j];
                    let nd = d + rc.max(0.0);
                    if nd < dist[n + j] {
                        dist[n + j] = nd;
                        parent[n + j] = node;
                        heap.push(Reverse((D(nd), n + j)));
                    }
                }
            } else {
                let j = node - n;
                for &iu in &center_flows[j] {
                    let i = iu as usize;
                    if flow.get(&(iu, j as u32)).copied().unwrap_or(0.0) <= tol {
                        continue;
                    }
                    let rc = -cost(i, j)? + pot[n + j] - pot[i];
                    let nd = d + rc.max(0.0);
                    if nd < dist[i] {
                        dist[i] = nd;
                        parent[i] = node;
                        heap.push(Reverse((D(nd), i)));
                    }
                }
            }
        }
        // Cheapest reachable center with remaining demand.
        let mut target = usize::MAX;
        for j in 0..k {
            if rem_demand[j] > tol
                && dist[n + j].is_finite()
                && (target == usize::MAX || dist[n + j] < dist[n + target - n])
            {
                target = n + j;
            }
        }
        if target == usize::MAX {
            break; // nothing reachable; residual drift only
        }
        let d_target = dist[target];
        for v in 0..n + k {
            if dist[v].is_finite() {
                pot[v] += dist[v].min(d_target);
            } else {
                pot[v] += d_target;
            }
        }
        // Bottleneck along the path.
        let mut delta = rem_demand[target - n];
        let mut node = target;
        while parent[node] != usize::MAX {
            let prev = parent[node];
            if prev >= n {
                // reverse arc center->point limited by its flow
                let key = (node as u32, (prev - n) as u32);
                delta = delta.min(flow[&key]);
            }
            node = prev;
        }
        let source = node;
        delta = delta.min(rem_supply[source]);
        if delta <= tol {
            break;
        }
        // Apply augmentation.
        let mut node = target;
        while parent[node] != usize::MAX {
            let prev = parent[node];
            if prev < n {
                let key = (prev as u32, (node - n) as u32);
                let e = flow.entry(key).or_insert(0.0);
                if *e == 0.0 {
                    center_flows[node - n].push(prev as u32);
                }
                *e += delta;
            } else {
                let key = (node as u32, (prev - n) as u32);
                *flow.get_mut(&key).unwrap() -= delta;
            }
            node = prev;
        }
        rem_supply[source] -= delta;
        rem_demand[target - n] -= delta;
    }

    if rem_supply.iter().any(|&s| s > 1e-6 * (1.0 + total)) {
        return Err(Error::Config(
            "shortest-path transport solver did not converge".into(),
        ));
    }

    let mut entries: Vec<TransportEntry> = flow
        .into_iter()
        .filter(|&(_, m)| m > 0.0)
        .map(|((i, j), m)| TransportEntry {
            point: i as usize,
            center: j as usize,
            mass: m,
        })
        .collect();
    entries.sort_by_key(|e| (e.point, e.center));
    let mut objective = 0.0;
    for e in &entries {
        objective += e.mass * cost(e.point, e.center)?;
    }
    Ok(TransportPlan { entries, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{EuclideanSpace, MetricBackend};
    use std::sync::Arc;

    fn line(xs: &[f64], ws: Option<&[f64]>) -> WeightedPointSet {
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let backend = Arc::new(MetricBackend::Euclidean(
            EuclideanSpace::from_rows(1, &rows).unwrap(),
        ));
        match ws {
            Some(w) => WeightedPointSet::new(
                backend,
                (0..xs.len()).map(PointId).collect(),
                w.to_vec(),
            )
            .unwrap(),
            None => WeightedPointSet::unit(backend).unwrap(),
        }
    }

    #[test]
    fn identity_assignment_costs_zero() {
        let p = line(&[0.0, 1.0], None);
        let centers = [PointId(0), PointId(1)];
        let gamma = AssignmentConstraint::new(vec![1.0, 1.0]).unwrap();
        let plan = solve_transport(&p, &centers, &gamma, 1.0).unwrap();
        assert_eq!(plan.objective, 0.0);
    }

    #[test]
    fn forced_move_costs_distance() {
        let p = line(&[0.0, 1.0], None);
        let centers = [PointId(0), PointId(1)];
        let gamma = AssignmentConstraint::new(vec![2.0, 0.0]).unwrap();
        let plan = solve_transport(&p, &centers, &gamma, 1.0).unwrap();
        assert!((plan.objective - 1.0).abs() < 1e-12);
        // marginals respected
        let rows = plan.row_sums(2);
        assert!((rows[0] - 1.0).abs() < 1e-12 && (rows[1] - 1.0).abs() < 1e-12);
        let cols = plan.col_sums(2);
        assert!((cols[0] - 2.0).abs() < 1e-12 && cols[1].abs() < 1e-12);
    }

    #[test]
    fn mass_mismatch_rejected_and_renormalized() {
        let p = line(&[0.0, 1.0], None);
        let centers = [PointId(0), PointId(1)];
        let bad = AssignmentConstraint::new(vec![1.0, 0.5]).unwrap();
        assert!(matches!(
            solve_transport(&p, &centers, &bad, 1.0),
            Err(Error::MassMismatch { .. })
        ));
        // within 1e-6 relative: renormalized instead
        let near = AssignmentConstraint::new(vec![1.0000001, 1.0]).unwrap();
        assert!(solve_transport(&p, &centers, &near, 1.0).is_ok());
    }

    #[test]
    fn induced_constraint_examples() {
        let p = line(&[0.0, 10.0], None);
        let g = AssignmentConstraint::induced(&p, &[PointId(0), PointId(1)]).unwrap();
        assert_eq!(g.masses(), &[1.0, 1.0]);
        let q = line(&[0.0, 1.0, 2.0], None);
        let g1 = AssignmentConstraint::induced(&q, &[PointId(0)]).unwrap();
        assert_eq!(g1.masses(), &[3.0]);
    }

    #[test]
    fn induced_constraint_attains_unconstrained_cost() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let xs: Vec<f64> = (0..30).map(|_| rng.random_range(-10.0..10.0)).collect();
        let p = line(&xs, None);
        let centers = [PointId(2), PointId(11), PointId(23), PointId(29)];
        for z in [1.0, 2.0] {
            let gamma = AssignmentConstraint::induced(&p, &centers).unwrap();
            assert!((gamma.total() - p.total_weight()).abs() < 1e-9);
            let plan = solve_transport(&p, &centers, &gamma, z).unwrap();
            let unconstrained = p.cost_z(&centers, z).unwrap();
            assert!(
                (plan.objective - unconstrained).abs() <= 1e-9 * unconstrained.max(1.0),
                "z={z}: {} vs {unconstrained}",
                plan.objective
            );
        }
    }

    #[test]
    fn random_constraint_deterministic_and_normalized() {
        let a = AssignmentConstraint::random(3, 9.0, 5).unwrap();
        let b = AssignmentConstraint::random(3, 9.0, 5).unwrap();
        assert_eq!(a.masses(), b.masses());
        assert!((a.total() - 9.0).abs() < 1e-9);
        assert!(a.masses().iter().all(|&m| m >= 0.0));
        let one = AssignmentConstraint::random(1, 4.0, 1).unwrap();
        assert!((one.masses()[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn objective_scales_linearly_with_mass() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let xs: Vec<f64> = (0..12).map(|_| rng.random_range(-4.0..4.0)).collect();
        let ws: Vec<f64> = (0..12).map(|_| rng.random_range(0.2..2.0)).collect();
        let p = line(&xs, Some(&ws));
        let centers = [PointId(0), PointId(5), PointId(9)];
        let gamma = AssignmentConstraint::random(3, p.total_weight(), 3).unwrap();
        let base = solve_transport(&p, &centers, &gamma, 1.0).unwrap().objective;
        let lambda = 3.5;
        let scaled_ws: Vec<f64> = ws.iter().map(|w| w * lambda).collect();
        let p2 = line(&xs, Some(&scaled_ws));
        let scaled = solve_transport(&p2, &centers, &gamma.scaled(lambda), 1.0)
            .unwrap()
            .objective;
        assert!((scaled - lambda * base).abs() <= 1e-9 * scaled.max(1.0));
    }

    #[test]
    fn optimality_lower_bounds_feasible_plans() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..20 {
            let n = rng.random_range(3..10);
            let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let p = line(&xs, None);
            let centers: Vec<PointId> = (0..3.min(n)).map(PointId).collect();
            let gamma =
                AssignmentConstraint::random(centers.len(), p.total_weight(), trial).unwrap();
            let opt = solve_transport(&p, &centers, &gamma, 1.0).unwrap();
            // Greedy feasible plan: fill centers in order from points in order.
            let mut rem: Vec<f64> = gamma.masses().to_vec();
            let mut feasible_cost = 0.0;
            for i in 0..p.len() {
                let mut need = p.weight(i);
                for (j, r) in rem.iter_mut().enumerate() {
                    let m = need.min(*r);
                    if m > 0.0 {
                        feasible_cost += m * p.dist(i, centers[j]).unwrap();
                        *r -= m;
                        need -= m;
                    }
                }
            }
            assert!(
                opt.objective <= feasible_cost + 1e-9 * feasible_cost.max(1.0),
                "optimal {} beat by greedy {}",
                opt.objective,
                feasible_cost
            );
        }
    }

    #[test]
    fn simplex_and_shortest_paths_agree() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for trial in 0..25 {
            let n = rng.random_range(2..20);
            let k = rng.random_range(1..6);
            let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-8.0..8.0)).collect();
            let ws: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..3.0)).collect();
            let p = line(&xs, Some(&ws));
            let centers: Vec<PointId> = (0..k).map(|j| PointId(j % n)).collect();
            let gamma = AssignmentConstraint::random(k, p.total_weight(), 100 + trial).unwrap();
            for z in [1.0, 2.0] {
                let a = solve_transport_with(&p, &centers, &gamma, z, TransportMethod::Simplex)
                    .unwrap();
                let b = solve_transport_with(
                    &p,
                    &centers,
                    &gamma,
                    z,
                    TransportMethod::ShortestPaths,
                )
                .unwrap();
                assert!(
                    (a.objective - b.objective).abs() <= 1e-7 * a.objective.max(1.0),
                    "n={n} k={k} z={z}: simplex {} vs ssp {}",
                    a.objective,
                    b.objective
                );
            }
        }
    }

    #[test]
    fn plan_marginals_match_inputs() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let n = 25;
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let ws: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
        let p = line(&xs, Some(&ws));
        let centers = [PointId(1), PointId(8), PointId(20)];
        let gamma = AssignmentConstraint::random(3, p.total_weight(), 77).unwrap();
        let plan = solve_transport(&p, &centers, &gamma, 2.0).unwrap();
        let rows = plan.row_sums(n);
        for i in 0..n {
            assert!(
                (rows[i] - ws[i]).abs() <= 1e-9 * ws[i].max(1.0),
                "row {i}: {} vs {}",
                rows[i],
                ws[i]
            );
        }
        let cols = plan.col_sums(3);
        for (col, mass) in cols.iter().zip(gamma.masses()) {
            assert!((col - mass).abs() <= 1e-9 * mass.max(1.0));
        }
        // objective consistent with entries
        let mut recomputed = 0.0;
        for e in &plan.entries {
            recomputed += e.mass * powz(p.dist(e.point, centers[e.center]).unwrap(), 2.0);
        }
        assert!((recomputed - plan.objective).abs() <= 1e-9 * plan.objective.max(1.0));
    }
}
