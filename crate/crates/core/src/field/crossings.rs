//! Level crossings and local maxima of grid samples, the discrete
//! counterparts of the Rice-formula quantities.

use super::sample::FieldSample;

/// Number of indices `i` with `values[i] < u ≤ values[i+1]` on a 1-D grid
/// sample.
pub fn count_upcrossings(sample: &FieldSample, u: f64) -> usize {
    let geometry = sample
        .grid_geometry()
        .expect("upcrossings are defined for grid samples");
    assert_eq!(geometry.dim(), 1, "upcrossings need a 1-D grid");
    sample
        .values
        .windows(2)
        .filter(|w| w[0] < u && u <= w[1])
        .count()
}

/// A strict local maximum of a grid sample over the 2n-neighbourhood.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMaximum {
    pub index: Vec<usize>,
    pub linear_index: usize,
    pub value: f64,
    /// Set when the cell lies on the grid boundary, where the neighbourhood
    /// is truncated; callers that mirror continuum results usually exclude
    /// these.
    pub on_boundary: bool,
}

/// All cells strictly greater than every axis neighbour with value above
/// `u`.
pub fn local_maxima_above(sample: &FieldSample, u: f64) -> Vec<LocalMaximum> {
    let geometry = sample
        .grid_geometry()
        .expect("local maxima are defined for grid samples");
    let shape = &geometry.shape;
    let strides = geometry.strides();
    let values = &sample.values;
    let mut maxima = Vec::new();
    let mut idx = vec![0usize; shape.len()];
    for (flat, &v) in values.iter().enumerate() {
        if v <= u {
            advance(&mut idx, shape);
            continue;
        }
        let mut is_max = true;
        let mut on_boundary = false;
        for k in 0..shape.len() {
            if idx[k] == 0 || idx[k] + 1 == shape[k] {
                on_boundary = true;
            }
            if idx[k] > 0 && values[flat - strides[k]] >= v {
                is_max = false;
                break;
            }
            if idx[k] + 1 < shape[k] && values[flat + strides[k]] >= v {
                is_max = false;
                break;
            }
        }
        if is_max {
            maxima.push(LocalMaximum {
                index: idx.clone(),
                linear_index: flat,
                value: v,
                on_boundary,
            });
        }
        advance(&mut idx, shape);
    }
    maxima
}

/// Count of [`local_maxima_above`].
pub fn count_local_maxima_above(sample: &FieldSample, u: f64) -> usize {
    local_maxima_above(sample, u).len()
}

fn advance(idx: &mut [usize], shape: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return;
        }
        idx[k] = 0;
    }
}
