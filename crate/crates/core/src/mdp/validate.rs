use super::world::{World, ROW_TOLERANCE};

/// Which row of which kernel a defect was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRef {
    Transition { state: usize, action: usize },
    Observation { state: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowDefect {
    pub row: RowRef,
    pub sum: f64,
    /// Some entry lies outside `[0, 1]`.
    pub out_of_range: bool,
}

/// Structural check of a (possibly malformed) world description.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub defects: Vec<RowDefect>,
    pub communicating: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty() && self.communicating
    }
}

pub fn validate_world(world: &World) -> ValidationReport {
    validate_kernel(world.n_states(), world.n_actions(), world.kernel(), None)
}

/// Validates raw kernels as read from a file. `observations` is
/// `(n_observations, obs_kernel)` with rows indexed by state.
pub fn validate_kernel(
    n_states: usize,
    n_actions: usize,
    kernel: &[f64],
    observations: Option<(usize, &[f64])>,
) -> ValidationReport {
    let mut defects = Vec::new();
    for s in 0..n_states {
        for a in 0..n_actions {
            let start = (s * n_actions + a) * n_states;
            if let Some(d) = row_defect(&kernel[start..start + n_states], RowRef::Transition { state: s, action: a }) {
                defects.push(d);
            }
        }
    }
    if let Some((n_obs, obs)) = observations {
        for s in 0..n_states {
            if let Some(d) = row_defect(&obs[s * n_obs..(s + 1) * n_obs], RowRef::Observation { state: s }) {
                defects.push(d);
            }
        }
    }
    ValidationReport { defects, communicating: positive_graph_strongly_connected(n_states, n_actions, kernel) }
}

fn row_defect(row: &[f64], at: RowRef) -> Option<RowDefect> {
    let sum: f64 = row.iter().sum();
    let out_of_range = row.iter().any(|p| !(0.0..=1.0).contains(p));
    ((sum - 1.0).abs() > ROW_TOLERANCE || out_of_range).then_some(RowDefect { row: at, sum, out_of_range })
}

/// Edge `s -> s'` iff some action moves `s` to `s'` with positive probability.
pub fn positive_graph_strongly_connected(n_states: usize, n_actions: usize, kernel: &[f64]) -> bool {
    let mut forward = vec![Vec::new(); n_states];
    let mut backward = vec![Vec::new(); n_states];
    for s in 0..n_states {
        for t in 0..n_states {
            if (0..n_actions).any(|a| kernel[(s * n_actions + a) * n_states + t] > 0.0) {
                forward[s].push(t);
                backward[t].push(s);
            }
        }
    }
    reaches_all(&forward) && reaches_all(&backward)
}

fn reaches_all(adjacency: &[Vec<usize>]) -> bool {
    if adjacency.is_empty() {
        return true;
    }
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_row_defects() {
        let kernel = [0.5, 0.4, 0.5, 0.5];
        let report = validate_kernel(2, 1, &kernel, None);
        assert_eq!(report.defects.len(), 1);
        assert_eq!(report.defects[0].row, RowRef::Transition { state: 0, action: 0 });
        assert!(report.communicating);
        assert!(!report.is_valid());
    }

    #[test]
    fn detects_missing_back_edge() {
        // 0 -> 1 but 1 only loops.
        let kernel = [0.0, 1.0, 0.0, 1.0];
        assert!(!positive_graph_strongly_connected(2, 1, &kernel));
    }
}
