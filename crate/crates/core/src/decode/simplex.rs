//! Euclidean projection onto the probability simplex by repeated
//! normalise-and-clip.
//!
//! Starting from the raw vector, every pass shifts the still-active
//! coordinates by a common amount so they sum to one, then pins any that went
//! negative to zero and drops them from the active set. When a pass clips
//! nothing the vector is feasible. At most `m` passes are needed.

use super::ProbabilityVector;

/// Projects `p0` onto `{p : p >= 0, sum p = 1}`.
pub fn simplex_adjust(p0: &[f64]) -> ProbabilityVector {
    let mut p = p0.to_vec();
    adjust_in_place(&mut p, |_| {});
    ProbabilityVector(p)
}

/// Same as [`simplex_adjust`] and also returns the displacement of every
/// pass: pass 0 is the first normalisation, pass `i > 0` is the clipping of
/// pass `i - 1` combined with the normalisation of pass `i`. These
/// displacements are mutually orthogonal.
pub fn simplex_adjust_traced(p0: &[f64]) -> (ProbabilityVector, Vec<Vec<f64>>) {
    let mut p = p0.to_vec();
    let mut prev = p0.to_vec();
    let mut steps = Vec::new();
    adjust_in_place(&mut p, |after_shift| {
        steps.push(after_shift.iter().zip(&prev).map(|(a, b)| a - b).collect());
        prev.copy_from_slice(after_shift);
    });
    (ProbabilityVector(p), steps)
}

pub(crate) fn adjust_in_place(p: &mut [f64], mut on_shift: impl FnMut(&[f64])) {
    let m = p.len();
    if m == 0 {
        return;
    }
    let mut active = vec![true; m];
    let mut m_active = m;
    loop {
        let sum: f64 = p
            .iter()
            .zip(&active)
            .filter(|(_, &a)| a)
            .map(|(v, _)| *v)
            .sum();
        let shift = (sum - 1.0) / m_active as f64;
        for (v, _) in p.iter_mut().zip(&active).filter(|(_, &a)| a) {
            *v -= shift;
        }
        on_shift(p);

        let mut clipped = false;
        for (v, a) in p.iter_mut().zip(active.iter_mut()) {
            if *a && *v < 0.0 {
                *v = 0.0;
                *a = false;
                m_active -= 1;
                clipped = true;
            }
        }
        if !clipped {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn feasible_input_is_unchanged() {
        let t = 1.0 / 3.0;
        assert!(close(&simplex_adjust(&[t, t, t]), &[t, t, t], 1e-15));
    }

    #[test]
    fn clips_and_renormalises() {
        assert!(close(
            &simplex_adjust(&[0.9, 0.4, -0.3]),
            &[0.75, 0.25, 0.0],
            1e-15
        ));
        assert!(close(
            &simplex_adjust(&[2.0, 0.0, 0.0]),
            &[1.0, 0.0, 0.0],
            1e-15
        ));
        assert!(close(&simplex_adjust(&[-1.0, -1.0]), &[0.5, 0.5], 1e-15));
        assert!(close(&simplex_adjust(&[7.5]), &[1.0], 0.0));
    }

    #[test]
    fn four_class_steps_are_orthogonal() {
        // normalising leaves the first coordinate negative
        let (p, steps) = simplex_adjust_traced(&[-0.5, 0.6, 0.6, 0.6]);
        assert_eq!(steps.len(), 2);
        let s0 = &steps[0];
        let s1 = &steps[1];
        assert!(s0.iter().all(|&v| (v - s0[0]).abs() < 1e-15));
        // second motion is proportional to [-3, 1, 1, 1]
        let k = s1[1];
        assert!(close(s1, &[-3.0 * k, k, k, k], 1e-15));
        let d: f64 = s0.iter().zip(s1).map(|(a, b)| a * b).sum();
        assert!(d.abs() < 1e-15);
        assert!(close(&p, &[0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 1e-15));
    }

    #[test]
    fn steps_sum_to_total_displacement() {
        let x = [0.3, -1.2, 2.5, 0.1, -0.4];
        let (p, steps) = simplex_adjust_traced(&x);
        let mut y = x.to_vec();
        for s in &steps {
            for (v, d) in y.iter_mut().zip(s) {
                *v += d;
            }
        }
        // the final pass clips nothing, so the last shift lands on p
        assert!(close(&y, &p, 1e-14));
    }
}
