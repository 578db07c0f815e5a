use crate::error::{Error, Result};

/// Hyperparameters of [`train_logistic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    /// Weight of `lambda / 2 * |w|^2`; the bias is not penalised.
    pub l2_lambda: f64,
    pub max_epochs: usize,
    /// Initial step; halved after a rejected step, grown by 1.5 after an
    /// accepted one.
    pub learning_rate: f64,
    /// Stop once the full gradient norm falls below this.
    pub convergence_tol: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            l2_lambda: 1e-3,
            max_epochs: 1000,
            learning_rate: 1.0,
            convergence_tol: 1e-6,
        }
    }
}

/// Linear logistic model; decision value `2 sigmoid(w.x + b) - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    weights: Vec<f64>,
    bias: f64,
    params: LogisticParams,
}

impl LogisticModel {
    pub fn from_parts(weights: Vec<f64>, bias: f64, params: LogisticParams) -> Result<Self> {
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        if !bias.is_finite() {
            return Err(Error::NonFinite {
                index: weights.len(),
                value: bias,
            });
        }
        Ok(LogisticModel {
            weights,
            bias,
            params,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn params(&self) -> LogisticParams {
        self.params
    }

    pub fn logit(&self, x: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }

    /// `P(+1|x) - P(-1|x)`, in `(-1, 1)`.
    pub fn decision(&self, x: &[f64]) -> f64 {
        (0.5 * self.logit(x)).tanh()
    }
}

/// `log(1 + exp(-z))` without overflow.
fn softplus_neg(z: f64) -> f64 {
    if z > 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

struct Objective<'a, R> {
    x: &'a [R],
    y: &'a [i8],
    lambda: f64,
    dim: usize,
}

impl<R: AsRef<[f64]>> Objective<'_, R> {
    fn loss(&self, w: &[f64], b: f64) -> f64 {
        let t = self.x.len() as f64;
        let data: f64 = self
            .x
            .iter()
            .zip(self.y)
            .map(|(row, &yi)| {
                let z = b + dot(w, row.as_ref());
                softplus_neg(yi as f64 * z)
            })
            .sum::<f64>()
            / t;
        data + 0.5 * self.lambda * dot(w, w)
    }

    /// Gradient with respect to `(w, b)`, bias last.
    fn gradient(&self, w: &[f64], b: f64) -> Vec<f64> {
        let t = self.x.len() as f64;
        let mut g = vec![0.0; self.dim + 1];
        for (row, &yi) in self.x.iter().zip(self.y) {
            let row = row.as_ref();
            let y = yi as f64;
            // d/dz log(1 + exp(-y z)) = -y sigmoid(-y z)
            let coef = -y * sigmoid(-y * (b + dot(w, row))) / t;
            for (gk, xk) in g.iter_mut().zip(row) {
                *gk += coef * xk;
            }
            g[self.dim] += coef;
        }
        for (gk, wk) in g.iter_mut().zip(w) {
            *gk += self.lambda * wk;
        }
        g
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fits L2-regularised logistic regression by full-batch gradient descent.
///
/// `y` holds `+1`/`-1`. A step that raises the loss is rejected and the
/// learning rate halved; an accepted step grows it by 1.5.
pub fn train_logistic<R: AsRef<[f64]>>(
    x: &[R],
    y: &[i8],
    params: LogisticParams,
) -> Result<LogisticModel> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if !y.contains(&1) || !y.contains(&-1) {
        return Err(Error::InvalidArgument(
            "binary training set needs both +1 and -1 samples".into(),
        ));
    }
    if let Some(&bad) = y.iter().find(|&&v| v != 1 && v != -1) {
        return Err(Error::InvalidArgument(format!(
            "binary label {bad} is not +-1"
        )));
    }
    let dim = x[0].as_ref().len();
    if x.iter().any(|r| r.as_ref().len() != dim) {
        return Err(Error::Shape("ragged training rows".into()));
    }
    let obj = Objective {
        x,
        y,
        lambda: params.l2_lambda,
        dim,
    };

    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut loss = obj.loss(&w, b);
    let mut lr = params.learning_rate;
    let mut epochs = 0;
    let mut g = obj.gradient(&w, b);
    while epochs < params.max_epochs {
        if dot(&g, &g).sqrt() < params.convergence_tol {
            break;
        }
        epochs += 1;
        let w_new: Vec<f64> = w.iter().zip(&g).map(|(wk, gk)| wk - lr * gk).collect();
        let b_new = b - lr * g[dim];
        let loss_new = obj.loss(&w_new, b_new);
        if !loss_new.is_finite() {
            return Err(Error::Diverged(format!(
                "non-finite loss at epoch {epochs} (learning rate {lr:e}, previous loss {loss})"
            )));
        }
        if loss_new <= loss {
            w = w_new;
            b = b_new;
            loss = loss_new;
            g = obj.gradient(&w, b);
            lr *= 1.5;
        } else {
            lr *= 0.5;
            if lr < 1e-300 {
                return Err(Error::Diverged(format!(
                    "learning rate underflow at epoch {epochs}, loss {loss}"
                )));
            }
        }
    }
    Ok(LogisticModel {
        weights: w,
        bias: b,
        params,
    })
}
