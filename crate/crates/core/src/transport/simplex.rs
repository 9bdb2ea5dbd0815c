//! Transportation simplex (MODI method) on a spanning-tree basis.
//!
//! Rows are sources, columns are sinks. The basis always holds `m + n - 1`
//! cells forming a spanning tree of the bipartite row/column graph; degenerate
//! basic cells carry zero flow. Termination is the exact LP optimality test:
//! every reduced cost `c_ij - u_i - v_j` is nonnegative up to a relative
//! epsilon.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
pub(crate) struct TransportPlan {
    pub flows: Vec<(usize, usize, f64)>,
    pub cost: f64,
}

/// Solves `min Σ c_ij x_ij` subject to row sums `supply` and column sums
/// `demand`. Both must be strictly positive and have equal totals.
pub(crate) fn solve(supply: &[f64], demand: &[f64], cost: &[f64]) -> TransportPlan {
    let (m, n) = (supply.len(), demand.len());
    assert_eq!(cost.len(), m * n);
    assert!(m > 0 && n > 0);
    let c = |i: usize, j: usize| cost[i * n + j];
    let scale = cost.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
    let eps = 1e-12 * scale;

    // north-west corner start
    let mut ra = supply.to_vec();
    let mut rb = demand.to_vec();
    let mut cells: Vec<(usize, usize)> = Vec::with_capacity(m + n - 1);
    let mut flow: Vec<f64> = Vec::with_capacity(m + n - 1);
    let (mut i, mut j) = (0, 0);
    loop {
        let x = if i == m - 1 && j == n - 1 { ra[i].max(0.0) } else { ra[i].min(rb[j]).max(0.0) };
        cells.push((i, j));
        flow.push(x);
        ra[i] -= x;
        rb[j] -= x;
        if i == m - 1 && j == n - 1 {
            break;
        } else if i == m - 1 {
            j += 1;
        } else if j == n - 1 || ra[i] <= rb[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    debug_assert_eq!(cells.len(), m + n - 1);

    let nodes = m + n;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (e, &(i, j)) in cells.iter().enumerate() {
        adj[i].push(e);
        adj[m + j].push(e);
    }
    let other = |e: usize, node: usize, cells: &[(usize, usize)]| -> usize {
        let (i, j) = cells[e];
        if node == i {
            m + j
        } else {
            i
        }
    };

    let mut pot = vec![0.0; nodes];
    let mut seen = vec![false; nodes];
    let mut parent_edge = vec![usize::MAX; nodes];
    let mut queue = VecDeque::with_capacity(nodes);
    let mut pivots = 0usize;
    // Dantzig pricing; after this many pivots fall back to first-negative
    // pricing, which breaks degenerate cycles in practice.
    let dantzig_limit = 200 * (m + n) + 10 * m * n;

    loop {
        // potentials from the tree, rooted at row 0
        seen.iter_mut().for_each(|s| *s = false);
        pot[0] = 0.0;
        seen[0] = true;
        queue.push_back(0);
        while let Some(u) = queue.pop_front() {
            for &e in &adj[u] {
                let v = other(e, u, &cells);
                if !seen[v] {
                    seen[v] = true;
                    let (ci, cj) = cells[e];
                    pot[v] = c(ci, cj) - pot[u];
                    queue.push_back(v);
                }
            }
        }

        let mut entering = None;
        let mut best = -eps;
        'price: for i in 0..m {
            for j in 0..n {
                let r = c(i, j) - pot[i] - pot[m + j];
                if r < best {
                    best = r;
                    entering = Some((i, j));
                    if pivots > dantzig_limit {
                        break 'price;
                    }
                }
            }
        }
        let Some((ei, ej)) = entering else { break };
        pivots += 1;

        // tree path from column ej to row ei
        seen.iter_mut().for_each(|s| *s = false);
        let start = m + ej;
        seen[start] = true;
        queue.clear();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            if u == ei {
                break;
            }
            for &e in &adj[u] {
                let v = other(e, u, &cells);
                if !seen[v] {
                    seen[v] = true;
                    parent_edge[v] = e;
                    queue.push_back(v);
                }
            }
        }
        queue.clear();
        let mut path = Vec::new();
        let mut node = ei;
        while node != start {
            let e = parent_edge[node];
            path.push(e);
            node = other(e, node, &cells);
        }
        path.reverse(); // now ordered from column ej to row ei

        // edges at odd positions (1st, 3rd, ...) lose flow
        let mut theta = f64::INFINITY;
        let mut leave = usize::MAX;
        for (k, &e) in path.iter().enumerate() {
            if k % 2 == 0 && flow[e] < theta {
                theta = flow[e];
                leave = e;
            }
        }
        for (k, &e) in path.iter().enumerate() {
            if k % 2 == 0 {
                flow[e] = (flow[e] - theta).max(0.0);
            } else {
                flow[e] += theta;
            }
        }
        flow[leave] = 0.0;

        let (li, lj) = cells[leave];
        adj[li].retain(|&e| e != leave);
        adj[m + lj].retain(|&e| e != leave);
        cells[leave] = (ei, ej);
        flow[leave] = theta;
        adj[ei].push(leave);
        adj[m + ej].push(leave);
    }

    let flows: Vec<(usize, usize, f64)> = cells
        .iter()
        .zip(&flow)
        .filter(|(_, &f)| f > 0.0)
        .map(|(&(i, j), &f)| (i, j, f))
        .collect();
    let cost = flows.iter().map(|&(i, j, f)| f * c(i, j)).sum();
    TransportPlan { flows, cost }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_instance() {
        // 3x4 instance; optimum 480 (checked with an external LP solver)
        let supply = [20.0, 30.0, 25.0];
        let demand = [10.0, 10.0, 35.0, 20.0];
        let cost = [
            2.0, 3.0, 11.0, 7.0, //
            1.0, 0.0, 6.0, 1.0, //
            5.0, 8.0, 15.0, 9.0,
        ];
        let plan = solve(&supply, &demand, &cost);
        let mut rows = [0.0; 3];
        let mut cols = [0.0; 4];
        for &(i, j, f) in &plan.flows {
            rows[i] += f;
            cols[j] += f;
        }
        assert_eq!(rows, supply);
        assert_eq!(cols, demand);
        assert!((plan.cost - 480.0).abs() < 1e-9, "cost {}", plan.cost);
    }

    #[test]
    fn single_cell() {
        let plan = solve(&[1.0], &[1.0], &[4.0]);
        assert_eq!(plan.flows, vec![(0, 0, 1.0)]);
        assert_eq!(plan.cost, 4.0);
    }

    #[test]
    fn monotone_on_the_line() {
        // squared distance on the line: optimal plan is the sorted matching
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [0.5, 1.5, 2.5, 3.5];
        let cost: Vec<f64> = xs.iter().flat_map(|x| ys.iter().map(move |y| (x - y) * (x - y))).collect();
        let plan = solve(&[0.25; 4], &[0.25; 4], &cost);
        assert!((plan.cost - 0.25).abs() < 1e-12);
    }
}
