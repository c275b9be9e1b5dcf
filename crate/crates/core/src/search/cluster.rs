use serde::Serialize;

use crate::linalg::StateVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cluster {
    /// Index of the lowest-residual member.
    pub representative: usize,
    pub members: Vec<usize>,
}

fn find(parent: &mut [usize], mut k: usize) -> usize {
    while parent[k] != k {
        parent[k] = parent[parent[k]];
        k = parent[k];
    }
    k
}

/// Single-linkage clustering of canonical vectors under Euclidean distance.
///
/// Points are swept in the order of a fixed real projection; two points can
/// only be within `threshold` if their projections are, which bounds the
/// comparisons to a sliding window. Clusters are returned in the order of
/// their smallest member index.
pub fn cluster(items: &[(StateVector, f64)], threshold: f64) -> Vec<Cluster> {
    let n = items.len();
    if n == 0 {
        return Vec::new();
    }
    let weights: Vec<f64> = (0..2 * items[0].0.dim())
        .map(|k| 1.0 + (k as f64 * 0.754_877_666).fract())
        .collect();
    let wnorm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    let reals: Vec<Vec<f64>> = items.iter().map(|(s, _)| s.to_reals()).collect();
    let keys: Vec<f64> = reals
        .iter()
        .map(|x| x.iter().zip(&weights).map(|(a, w)| a * w).sum::<f64>() / wnorm)
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));

    let t2 = threshold * threshold;
    let mut parent: Vec<usize> = (0..n).collect();
    for (pos, &i) in order.iter().enumerate() {
        for &j in order[..pos].iter().rev() {
            if keys[i] - keys[j] > threshold {
                break;
            }
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri == rj {
                continue;
            }
            let d2: f64 = reals[i].iter().zip(&reals[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 <= t2 {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }

    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for k in 0..n {
        let r = find(&mut parent, k);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push((r, Vec::new()));
        }
        groups[slot[r]].1.push(k);
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let representative = *members
                .iter()
                .min_by(|&&a, &&b| items[a].1.total_cmp(&items[b].1).then(a.cmp(&b)))
                .expect("non-empty");
            Cluster {
                representative,
                members,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn v(a: f64, b: f64) -> StateVector {
        StateVector::new(vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]).unwrap()
    }

    #[test]
    fn near_duplicates_merge() {
        let items = vec![(v(1.0, 0.0), 1e-20), (v(1.0, 1e-9), 1e-22), (v(0.0, 1.0), 0.0)];
        let c = cluster(&items, 1e-8);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].members, vec![0, 1]);
        assert_eq!(c[0].representative, 1);
    }

    #[test]
    fn linkage_is_transitive() {
        let items: Vec<_> = (0..5).map(|k| (v(1.0, k as f64 * 0.5e-6), 0.0)).collect();
        assert_eq!(cluster(&items, 0.6e-6).len(), 1);
        assert_eq!(cluster(&items, 0.4e-6).len(), 5);
    }
}
