//! Realizations of a field on a grid or a point list.

use std::io::Write;

/// Regular grid of sample nodes: node `i` sits at `origin + i·spacing`
/// per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGeometry {
    pub origin: Vec<f64>,
    pub spacing: f64,
    pub shape: Vec<usize>,
}

impl GridGeometry {
    pub fn new(origin: Vec<f64>, spacing: f64, shape: Vec<usize>) -> Self {
        assert_eq!(origin.len(), shape.len());
        assert!(spacing > 0.0);
        assert!(shape.iter().all(|&s| s >= 1));
        Self {
            origin,
            spacing,
            shape,
        }
    }

    pub fn new_1d(origin: f64, spacing: f64, len: usize) -> Self {
        Self::new(vec![origin], spacing, vec![len])
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.shape.len()];
        for k in (0..self.shape.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.shape[k + 1];
        }
        strides
    }

    pub fn decode(&self, mut flat: usize) -> Vec<usize> {
        let strides = self.strides();
        strides
            .iter()
            .map(|&s| {
                let q = flat / s;
                flat %= s;
                q
            })
            .collect()
    }

    pub fn node(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .zip(&self.origin)
            .map(|(&i, &o)| o + i as f64 * self.spacing)
            .collect()
    }
}

/// Where a sample lives.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleDomain {
    Grid(GridGeometry),
    Points { dim: usize, coords: Vec<f64> },
}

/// How a sample was synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisMethod {
    CirculantEmbedding,
    ExactFactorization,
    FourierFeatures(usize),
}

impl std::fmt::Display for SynthesisMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SynthesisMethod::CirculantEmbedding => write!(f, "circulant-embedding"),
            SynthesisMethod::ExactFactorization => write!(f, "exact-factorization"),
            SynthesisMethod::FourierFeatures(k) => write!(f, "fourier-features-{k}"),
        }
    }
}

/// One realization of the field. The seed together with the method and
/// geometry reproduces the values bit for bit.
#[derive(Debug, Clone)]
pub struct FieldSample {
    pub domain: SampleDomain,
    pub values: Vec<f64>,
    pub seed: u64,
    pub method: SynthesisMethod,
    /// Diagonal jitter used by exact factorization, when any.
    pub jitter: Option<f64>,
}

impl FieldSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid_geometry(&self) -> Option<&GridGeometry> {
        match &self.domain {
            SampleDomain::Grid(g) => Some(g),
            SampleDomain::Points { .. } => None,
        }
    }

    fn location(&self, i: usize) -> Vec<f64> {
        match &self.domain {
            SampleDomain::Grid(g) => g.node(&g.decode(i)),
            SampleDomain::Points { dim, coords } => coords[i * dim..(i + 1) * dim].to_vec(),
        }
    }

    /// CSV export with header `index,x0,...,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let dim = match &self.domain {
            SampleDomain::Grid(g) => g.dim(),
            SampleDomain::Points { dim, .. } => *dim,
        };
        write!(w, "index")?;
        for k in 0..dim {
            write!(w, ",x{k}")?;
        }
        writeln!(w, ",value")?;
        for (i, v) in self.values.iter().enumerate() {
            write!(w, "{i}")?;
            for c in self.location(i) {
                write!(w, ",{c}")?;
            }
            writeln!(w, ",{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strides_and_decode() {
        let g = GridGeometry::new(vec![0.0, 0.0], 0.5, vec![3, 4]);
        assert_eq!(g.strides(), vec![4, 1]);
        assert_eq!(g.decode(0), vec![0, 0]);
        assert_eq!(g.decode(5), vec![1, 1]);
        assert_eq!(g.decode(11), vec![2, 3]);
        assert_eq!(g.node(&[2, 3]), vec![1.0, 1.5]);
    }

    #[test]
    fn csv_has_coordinates() {
        let sample = FieldSample {
            domain: SampleDomain::Grid(GridGeometry::new_1d(0.0, 0.5, 3)),
            values: vec![1.0, 2.0, 3.0],
            seed: 0,
            method: SynthesisMethod::CirculantEmbedding,
            jitter: None,
        };
        let mut buf = Vec::new();
        sample.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("index,x0,value\n"));
        assert!(text.contains("1,0.5,2\n"));
    }
}
