//! Z-curve ordering and weighted contiguous partitioning of leaves.

use super::forest::QuadForest;

/// Leaf indices sorted by (tree, depth-first Morton key). The forest already
/// stores leaves in this order, so this is the identity for any forest built
/// through its public operations; it is recomputed from the keys rather than
/// assumed.
pub fn zcurve_order(forest: &QuadForest) -> Vec<usize> {
    let mut order: Vec<usize> = (0..forest.len()).collect();
    order.sort_by_key(|&k| forest.leaf(k).key);
    order
}

/// Splits the ordered leaves into `parts` contiguous segments of roughly equal
/// weight. Leaf `order[k]` goes to the part that contains the midpoint of its
/// weight interval, so no part exceeds `total/parts + max weight`.
pub fn partition_weighted(order: &[usize], weights: &[f64], parts: usize) -> Vec<usize> {
    let parts = parts.max(1);
    let mut out = vec![0usize; weights.len()];
    let total: f64 = order.iter().map(|&k| weights[k]).sum();
    if total <= 0.0 {
        return out;
    }
    let mut acc = 0.0;
    for &k in order {
        let mid = acc + 0.5 * weights[k];
        out[k] = ((mid * parts as f64 / total) as usize).min(parts - 1);
        acc += weights[k];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part_weights(order: &[usize], w: &[f64], p: &[usize], parts: usize) -> Vec<f64> {
        let mut s = vec![0.0; parts];
        for &k in order {
            s[p[k]] += w[k];
        }
        s
    }

    #[test]
    fn unit_weights_split_evenly() {
        let order: Vec<usize> = (0..8).collect();
        let w = vec![1.0; 8];
        let p = partition_weighted(&order, &w, 2);
        assert_eq!(part_weights(&order, &w, &p, 2), vec![4.0, 4.0]);
        assert!(partition_weighted(&order, &w, 1).iter().all(|&x| x == 0));
    }

    #[test]
    fn heavy_first_leaf() {
        let order: Vec<usize> = (0..6).collect();
        let w = [3.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let p = partition_weighted(&order, &w, 2);
        let cut = p.iter().position(|&x| x == 1).unwrap();
        assert!(cut == 1 || cut == 2);
        for s in part_weights(&order, &w, &p, 2) {
            assert!(s <= 4.0 + 3.0);
        }
        // contiguous
        assert!(p.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn more_parts_than_leaves() {
        let order = [0usize, 1];
        let p = partition_weighted(&order, &[1.0, 1.0], 5);
        assert!(p.iter().all(|&x| x < 5));
    }
}
