use super::Fixing;
use crate::model::{Cost, Solution};

const INF: Cost = Cost::MAX / 4;

/// Covering knapsack `min c^T x, sum w_i x_i >= threshold` by a suffix DP
/// over remaining weight. Reconstruction prefers `x_i = 0` whenever that
/// stays optimal, which yields the lexicographically smallest optimum.
pub(super) fn solve_covering(
    weights: &[Cost],
    threshold: Cost,
    c: &[Cost],
    fix: Option<&[Fixing]>,
) -> Option<Solution> {
    let n = weights.len();
    let mut x = vec![false; n];
    let mut need = threshold;
    let mut free = Vec::with_capacity(n);
    for i in 0..n {
        match fix.and_then(|f| f[i]) {
            Some(true) => {
                x[i] = true;
                need -= weights[i];
            }
            Some(false) => {}
            None => free.push(i),
        }
    }
    let need = need.max(0) as usize;
    let reachable: Cost = free.iter().map(|&i| weights[i]).sum();
    if (reachable as usize) < need {
        return None;
    }

    let width = need + 1;
    let m = free.len();
    // best[j * width + r]: cheapest way to collect r more weight from free[j..]
    let mut best = vec![INF; (m + 1) * width];
    best[m * width] = 0;
    for j in (0..m).rev() {
        let i = free[j];
        let w = weights[i] as usize;
        let (head, tail) = best.split_at_mut((j + 1) * width);
        let row = &mut head[j * width..];
        let next = &tail[..width];
        for r in 0..width {
            let skip = next[r];
            let prev = next[r.saturating_sub(w)];
            let take = if prev >= INF { INF } else { prev + c[i] };
            row[r] = skip.min(take);
        }
    }
    debug_assert!(best[need] < INF);

    let mut r = need;
    for (j, &i) in free.iter().enumerate() {
        let here = best[j * width + r];
        if best[(j + 1) * width + r] == here {
            continue;
        }
        x[i] = true;
        r = r.saturating_sub(weights[i] as usize);
    }
    Some(Solution::new(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(weights: &[Cost], threshold: Cost, c: &[Cost]) -> Option<(Cost, Vec<bool>)> {
        let n = weights.len();
        let mut best: Option<(Cost, Vec<bool>)> = None;
        for mask in 0..(1u32 << n) {
            let x: Vec<bool> = (0..n).map(|i| mask >> (n - 1 - i) & 1 == 1).collect();
            let w: Cost = (0..n).filter(|&i| x[i]).map(|i| weights[i]).sum();
            if w < threshold {
                continue;
            }
            let v: Cost = (0..n).filter(|&i| x[i]).map(|i| c[i]).sum();
            // masks run in lexicographic order, so strict improvement keeps the smallest x
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, x));
            }
        }
        best
    }

    #[test]
    fn matches_enumeration_with_negative_costs() {
        let weights = [3, 1, 4, 1, 5, 9];
        for threshold in [0, 5, 11, 23] {
            for c in [[2, -1, 3, 0, 0, 4], [1, 1, 1, 1, 1, 1], [0, 0, 0, 0, 0, 0]] {
                let got = solve_covering(&weights, threshold, &c, None).unwrap();
                let (v, x) = brute(&weights, threshold, &c).unwrap();
                assert_eq!(got.cost(&c), v);
                assert_eq!(got.x(), &x[..]);
            }
        }
    }

    #[test]
    fn forced_items_are_respected() {
        let weights = [3, 4, 5];
        let fix = [Some(true), None, Some(false)];
        let x = solve_covering(&weights, 6, &[9, 1, 1], Some(&fix)).unwrap();
        assert_eq!(x.x(), &[true, true, false]);
        assert!(solve_covering(&weights, 13, &[1, 1, 1], Some(&fix)).is_none());
    }
}
