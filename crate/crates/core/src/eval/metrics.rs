use crate::error::{Error, Result};

/// Counts indexed `[truth][prediction]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(m: usize) -> Self {
        ConfusionMatrix {
            counts: vec![vec![0; m]; m],
        }
    }

    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let m = counts.len();
        if m == 0 || counts.iter().any(|r| r.len() != m) {
            return Err(Error::Shape(
                "confusion matrix must be square and non-empty".into(),
            ));
        }
        Ok(ConfusionMatrix { counts })
    }

    pub fn from_pairs(m: usize, truth: &[usize], pred: &[usize]) -> Result<Self> {
        if truth.len() != pred.len() {
            return Err(Error::LengthMismatch {
                expected: truth.len(),
                got: pred.len(),
            });
        }
        let mut c = ConfusionMatrix::new(m);
        for (&t, &p) in truth.iter().zip(pred) {
            c.add(t, p)?;
        }
        Ok(c)
    }

    pub fn add(&mut self, truth: usize, pred: usize) -> Result<()> {
        let m = self.counts.len();
        if truth >= m || pred >= m {
            return Err(Error::InvalidArgument(format!(
                "class pair ({truth}, {pred}) out of range for {m} classes"
            )));
        }
        self.counts[truth][pred] += 1;
        Ok(())
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn accuracy(&self) -> Result<f64> {
        let total = self.total();
        if total == 0 {
            return Err(Error::EmptyConfusion);
        }
        let hits: u64 = (0..self.counts.len()).map(|i| self.counts[i][i]).sum();
        Ok(hits as f64 / total as f64)
    }
}

/// `U(truth | prediction) = I(truth; prediction) / H(truth)`, in nats.
///
/// Every log term is `ln` of an exact integer ratio, so independent counts
/// give exactly 0 and a diagonal matrix exactly 1. When the truth is
/// constant the score is 1 if every prediction names that class and 0
/// otherwise.
pub fn uncertainty_coefficient(c: &ConfusionMatrix) -> Result<f64> {
    let total = c.total();
    if total == 0 {
        return Err(Error::EmptyConfusion);
    }
    let t = total as f64;
    let m = c.n_classes();
    let counts = c.counts();
    let row: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
    let col: Vec<u64> = (0..m).map(|j| counts.iter().map(|r| r[j]).sum()).collect();

    let h_truth: f64 = row
        .iter()
        .filter(|&&r| r > 0)
        .map(|&r| (r as f64 / t) * (t / r as f64).ln())
        .sum();
    if h_truth == 0.0 {
        let k = row.iter().position(|&v| v > 0).unwrap_or(0);
        return Ok(if col[k] == total { 1.0 } else { 0.0 });
    }
    let mut mutual = 0.0;
    for i in 0..m {
        for j in 0..m {
            let n = counts[i][j];
            if n == 0 {
                continue;
            }
            let num = n as u128 * total as u128;
            let den = row[i] as u128 * col[j] as u128;
            mutual += (n as f64 / t) * (num as f64 / den as f64).ln();
        }
    }
    Ok((mutual / h_truth).clamp(0.0, 1.0))
}

/// `sqrt(sum_t sum_i (p_ti - [i = truth_t])^2 / (T m))`.
pub fn brier_score<P: AsRef<[f64]>>(probs: &[P], truth: &[usize]) -> Result<f64> {
    if probs.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            got: probs.len(),
        });
    }
    if probs.is_empty() {
        return Err(Error::InvalidArgument(
            "brier score of no predictions".into(),
        ));
    }
    let m = probs[0].as_ref().len();
    let mut sum = 0.0;
    for (p, &y) in probs.iter().zip(truth) {
        let p = p.as_ref();
        if p.len() != m || y >= m {
            return Err(Error::Shape(format!(
                "probability vector of length {} with truth {y}, expected length {m}",
                p.len()
            )));
        }
        for (i, &pi) in p.iter().enumerate() {
            let d = pi - if i == y { 1.0 } else { 0.0 };
            sum += d * d;
        }
    }
    Ok((sum / (probs.len() * m) as f64).sqrt())
}
