//! Binary indexed tree over non-negative weights, used to draw
//! proportional-to-size without replacement in `O(log n)` per draw.

use rand::Rng;

#[derive(Debug, Clone)]
pub(crate) struct WeightTree {
    tree: Vec<f64>,
    values: Vec<f64>,
    positive: usize,
}

impl WeightTree {
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        let mut tree = vec![0.0; n + 1];
        for (i, &v) in values.iter().enumerate() {
            tree[i + 1] += v;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i + 1];
            }
        }
        WeightTree {
            tree,
            values: values.to_vec(),
            positive: values.iter().filter(|&&v| v > 0.0).count(),
        }
    }

    /// Number of entries with positive weight.
    pub fn positive(&self) -> usize {
        self.positive
    }

    pub fn total(&self) -> f64 {
        let mut i = self.values.len();
        let mut sum = 0.0;
        while i > 0 {
            sum += self.tree[i];
            i &= i - 1;
        }
        sum
    }

    pub fn remove(&mut self, idx: usize) {
        let v = self.values[idx];
        if v == 0.0 {
            return;
        }
        self.values[idx] = 0.0;
        self.positive -= 1;
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] -= v;
            i += i & i.wrapping_neg();
        }
    }

    /// Draws an index with probability proportional to its weight.
    /// Must only be called when `positive() > 0`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        debug_assert!(self.positive > 0);
        let target = rng.random::<f64>() * self.total();
        let n = self.values.len();
        let mut pos = 0;
        let mut rem = target;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        let idx = pos.min(n - 1);
        if self.values[idx] > 0.0 {
            idx
        } else {
            // Rounding in the partial sums can land on a removed entry.
            self.nearest_positive(idx)
        }
    }

    fn nearest_positive(&self, idx: usize) -> usize {
        let n = self.values.len();
        (1..n)
            .flat_map(|d| [idx.checked_sub(d), Some(idx + d)])
            .flatten()
            .find(|&j| j < n && self.values[j] > 0.0)
            .expect("tree has a positive entry")
    }
}
