use crate::error::{Error, Result};

/// Feature vector of one sample.
#[derive(Debug, Clone, PartialEq)]
pub enum Features {
    Dense(Vec<f64>),
    /// `(index, value)` pairs, 0-based, strictly increasing indices.
    Sparse(Vec<(usize, f64)>),
}

impl Features {
    /// Materialises the vector with `n` coordinates.
    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        match self {
            Features::Dense(v) => v.clone(),
            Features::Sparse(pairs) => {
                let mut v = vec![0.0; n];
                for &(i, x) in pairs {
                    v[i] = x;
                }
                v
            }
        }
    }

    /// Checks that every coordinate fits in `n` features.
    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            Features::Dense(v) if v.len() != n => Err(Error::Shape(format!(
                "feature vector has {} coordinates, model expects {n}",
                v.len()
            ))),
            Features::Sparse(pairs) => {
                for w in pairs.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(Error::InvalidArgument(format!(
                            "sparse indices not strictly increasing: {} then {}",
                            w[0].0, w[1].0
                        )));
                    }
                }
                match pairs.last() {
                    Some(&(i, _)) if i >= n => Err(Error::Shape(format!(
                        "feature index {i} out of range for {n} features"
                    ))),
                    _ => Ok(()),
                }
            }
            Features::Dense(_) => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Features,
    pub label: usize,
}

/// Labelled samples with `n_classes` classes and `n_features` features.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<Sample>,
    n_features: usize,
    n_classes: usize,
    class_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>, n_features: usize, n_classes: usize) -> Result<Self> {
        if n_classes == 0 {
            return Err(Error::InvalidArgument(
                "dataset needs at least one class".into(),
            ));
        }
        for (t, s) in samples.iter().enumerate() {
            if s.label >= n_classes {
                return Err(Error::InvalidArgument(format!(
                    "sample {t} has label {} but there are {n_classes} classes",
                    s.label
                )));
            }
            s.features.check_dim(n_features)?;
            let finite = match &s.features {
                Features::Dense(v) => v.iter().all(|x| x.is_finite()),
                Features::Sparse(p) => p.iter().all(|(_, x)| x.is_finite()),
            };
            if !finite {
                return Err(Error::InvalidArgument(format!(
                    "sample {t} has a non-finite feature"
                )));
            }
        }
        Ok(Dataset {
            samples,
            n_features,
            n_classes,
            class_names: None,
        })
    }

    /// Attaches one display name per class.
    pub fn with_class_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_classes {
            return Err(Error::Shape(format!(
                "{} class names for {} classes",
                names.len(),
                self.n_classes
            )));
        }
        self.class_names = Some(names);
        Ok(self)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn class_names(&self) -> Option<&[String]> {
        self.class_names.as_deref()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.label).collect()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.n_classes];
        for s in &self.samples {
            c[s.label] += 1;
        }
        c
    }

    /// Samples at `indices`, in that order, with the same classes and names.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
            n_features: self.n_features,
            n_classes: self.n_classes,
            class_names: self.class_names.clone(),
        }
    }

    /// Relabels class `c` as `perm[c]`; names move with their classes.
    pub fn permute_classes(&self, perm: &[usize]) -> Result<Dataset> {
        check_permutation(perm, self.n_classes)?;
        let samples = self
            .samples
            .iter()
            .map(|s| Sample {
                features: s.features.clone(),
                label: perm[s.label],
            })
            .collect();
        let class_names = self.class_names.as_ref().map(|names| {
            let mut out = vec![String::new(); names.len()];
            for (c, name) in names.iter().enumerate() {
                out[perm[c]] = name.clone();
            }
            out
        });
        Ok(Dataset {
            samples,
            n_features: self.n_features,
            n_classes: self.n_classes,
            class_names,
        })
    }

    /// Dense copy of every feature vector.
    pub fn dense_rows(&self) -> Vec<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| s.features.to_dense(self.n_features))
            .collect()
    }
}

pub(crate) fn check_permutation(perm: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    if perm.len() != m
        || perm
            .iter()
            .any(|&p| p >= m || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::InvalidArgument(format!(
            "{perm:?} is not a permutation of 0..{m}"
        )));
    }
    Ok(())
}

/// Per-feature affine map to zero mean and unit variance, fitted on a
/// training set. Features with zero variance keep scale 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(d: &Dataset) -> Self {
        let n = d.n_features();
        let t = d.len().max(1) as f64;
        let mut sum = vec![0.0; n];
        let mut sq = vec![0.0; n];
        for s in d.samples() {
            let x = s.features.to_dense(n);
            for k in 0..n {
                sum[k] += x[k];
                sq[k] += x[k] * x[k];
            }
        }
        let mean: Vec<f64> = sum.iter().map(|s| s / t).collect();
        let scale = (0..n)
            .map(|k| {
                let var = (sq[k] / t - mean[k] * mean[k]).max(0.0);
                let sd = var.sqrt();
                if sd > 1e-12 * (1.0 + mean[k].abs()) {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, scale }
    }

    pub fn from_parts(mean: Vec<f64>, scale: Vec<f64>) -> Result<Self> {
        if mean.len() != scale.len() {
            return Err(Error::Shape("mean and scale lengths differ".into()));
        }
        if scale.iter().any(|s| !(s.is_finite() && *s > 0.0)) || mean.iter().any(|m| !m.is_finite())
        {
            return Err(Error::InvalidArgument(
                "standardizer needs finite means and positive scales".into(),
            ));
        }
        Ok(Standardizer { mean, scale })
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn transform(&self, x: &Features) -> Vec<f64> {
        let mut v = x.to_dense(self.mean.len());
        for ((v, m), s) in v.iter_mut().zip(&self.mean).zip(&self.scale) {
            *v = (*v - m) / s;
        }
        v
    }
}
