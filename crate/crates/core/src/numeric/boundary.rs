use super::fd::{left_derivative, right_derivative};
use super::grid::{BoundaryField, Grid1D, InteriorField};
use crate::error::{Error, Result};

/// `K g (x, t) = x g(1, t) + (1 - x) g(0, t)`.
pub fn potential_k(g: &BoundaryField, grid: &Grid1D) -> InteriorField {
    let mut out = InteriorField::zeros(grid);
    for k in 0..grid.nt {
        let (g0, g1) = (g.left[k], g.right[k]);
        let s = out.slice_mut(k);
        let n = s.len();
        for (i, v) in s.iter_mut().enumerate() {
            *v = if i == 0 {
                g0
            } else if i == n - 1 {
                g1
            } else {
                let x = i as f64 / (n - 1) as f64;
                x * g1 + (1.0 - x) * g0
            };
        }
    }
    out
}

/// Endpoint values (`deriv_order` 0) or one-sided first derivatives
/// multiplied by `side_signs` (default `(-1, +1)`, the outward normal).
pub fn trace_restrict(
    v: &InteriorField,
    grid: &Grid1D,
    deriv_order: u8,
    side_signs: Option<(f64, f64)>,
) -> Result<BoundaryField> {
    let mut out = BoundaryField::zeros(grid);
    let h = grid.h();
    let (sl, sr) = side_signs.unwrap_or((-1.0, 1.0));
    for k in 0..grid.nt {
        let s = v.slice(k);
        let (a, b) = match deriv_order {
            0 => (s[0], s[s.len() - 1]),
            1 => (sl * left_derivative(s, h), sr * right_derivative(s, h)),
            d => return Err(Error::InvalidArgument(format!("trace derivative order {d} > 1"))),
        };
        out.left[k] = a;
        out.right[k] = b;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_of_left_unit() {
        let g = Grid1D::new(33, 1, 2).unwrap();
        let k = potential_k(&BoundaryField::constant(&g, 1.0, 0.0), &g);
        for i in 0..g.nx {
            assert!((k.at(i, 0) - (1.0 - g.x(i))).abs() < 1e-15);
        }
        assert_eq!(potential_k(&BoundaryField::zeros(&g), &g).max_abs(), 0.0);
    }

    #[test]
    fn traces_of_linear_fields() {
        let g = Grid1D::new(33, 2, 2).unwrap();
        let x = InteriorField::from_fn(&g, |x, _| x);
        let t0 = trace_restrict(&x, &g, 0, None).unwrap();
        assert_eq!((t0.left[0], t0.right[1]), (0.0, 1.0));
        let t1 = trace_restrict(&x, &g, 1, None).unwrap();
        assert!((t1.left[0] + 1.0).abs() < 1e-12 && (t1.right[0] - 1.0).abs() < 1e-12);
        let y = InteriorField::from_fn(&g, |x, _| 1.0 - x);
        let t = trace_restrict(&y, &g, 0, None).unwrap();
        assert_eq!((t.left[0], t.right[0]), (1.0, 0.0));
        assert!(trace_restrict(&y, &g, 2, None).is_err());
    }

    #[test]
    fn trace_of_potential_is_identity() {
        let g = Grid1D::new(21, 3, 2).unwrap();
        let b = BoundaryField { left: vec![0.3, -1.0, 2.5], right: vec![1.0 / 3.0, 7.0, -0.1] };
        assert_eq!(trace_restrict(&potential_k(&b, &g), &g, 0, None).unwrap(), b);
    }
}
