use crate::error::{Error, Result};

/// Negative least-squares slope of log OP against log γ over the top decade
/// of the grid.
pub fn diversity_order(gammas: &[f64], ops: &[f64]) -> Result<f64> {
    if gammas.len() != ops.len() || gammas.len() < 2 {
        return Err(Error::InvalidInput(
            "diversity order needs matching γ and OP grids with at least two points".into(),
        ));
    }
    let top = gammas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bottom = gammas.iter().copied().fold(f64::INFINITY, f64::min);
    if !(bottom > 0.0) || top < 10.0 * bottom * (1.0 - 1e-12) {
        return Err(Error::InvalidInput(
            "γ grid must be positive and span at least one decade".into(),
        ));
    }
    let window: Vec<(f64, f64)> = gammas
        .iter()
        .zip(ops)
        .filter(|(g, _)| **g >= top / 10.0 * (1.0 - 1e-12))
        .map(|(&g, &o)| (g, o))
        .collect();
    if let Some(&(_, o)) = window.iter().find(|(_, o)| !(*o > 0.0)) {
        return Err(Error::Domain {
            func: "diversity_order",
            arg: o,
            why: "OP must be positive in the fitting window",
        });
    }
    if window.len() < 2 {
        return Err(Error::InvalidInput(
            "fitting window holds fewer than two points".into(),
        ));
    }
    let n = window.len() as f64;
    let xs: Vec<f64> = window.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = window.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law() {
        let g: Vec<f64> = (0..=20).map(|i| 10f64.powf(i as f64 / 4.0)).collect();
        let op: Vec<f64> = g.iter().map(|x| 0.3 / x).collect();
        assert!((diversity_order(&g, &op).unwrap() - 1.0).abs() < 1e-6);
        let op2: Vec<f64> = g.iter().map(|x| 2.0 / (x * x)).collect();
        assert!((diversity_order(&g, &op2).unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn floor_has_zero_order() {
        let g = [1e5, 3e5, 1e6];
        assert!(diversity_order(&g, &[0.2, 0.2, 0.2]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(diversity_order(&[1.0, 2.0], &[0.1, 0.1]).is_err());
        assert!(diversity_order(&[1.0, 10.0], &[0.1, 0.0]).is_err());
        assert!(diversity_order(&[1.0], &[0.1]).is_err());
    }
}
