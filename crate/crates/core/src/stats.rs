//! Descriptive statistics for batches of runs.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for fewer than two
    /// values.
    pub std: f64,
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let std = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Some(Summary {
        count: values.len(),
        min,
        mean,
        max,
        std,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_spreadsheet_stdev() {
        // =STDEV.S(12,7,3,14,9,21,5,8,30,11) -> 8.09663...
        let rows = [12.0, 7.0, 3.0, 14.0, 9.0, 21.0, 5.0, 8.0, 30.0, 11.0];
        let s = summarize(&rows).unwrap();
        assert_eq!(s.count, 10);
        assert_eq!((s.min, s.max), (3.0, 30.0));
        assert!((s.mean - 12.0).abs() < 1e-12);
        assert!((s.std - 8.096_638_534).abs() < 1e-8, "{}", s.std);
        assert!(summarize(&[]).is_none());
        assert_eq!(summarize(&[4.0]).unwrap().std, 0.0);
    }
}
