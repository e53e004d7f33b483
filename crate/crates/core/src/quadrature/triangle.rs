//! Triangle rules in barycentric coordinates with weights summing to one.
//!
//! Degrees up to five use symmetric positive-weight rules; higher degrees use
//! a collapsed tensor product of Gauss-Legendre rules.

use super::gauss::gauss_legendre_unit;

pub type BaryRule = Vec<([f64; 3], f64)>;

fn orbit3(a: f64, w: f64, out: &mut BaryRule) {
    let b = 1.0 - 2.0 * a;
    out.push(([a, a, b], w));
    out.push(([a, b, a], w));
    out.push(([b, a, a], w));
}

pub fn triangle_rule(degree: usize) -> BaryRule {
    let mut r = BaryRule::new();
    match degree {
        0 | 1 => r.push(([1.0 / 3.0; 3], 1.0)),
        2 => orbit3(1.0 / 6.0, 1.0 / 3.0, &mut r),
        3 | 4 => {
            orbit3(0.445_948_490_915_965, 0.223_381_589_678_011, &mut r);
            orbit3(0.091_576_213_509_771, 0.109_951_743_655_322, &mut r);
            // restore the exact weight sum lost to the 15-digit table
            let s: f64 = r.iter().map(|p| p.1).sum();
            for p in &mut r {
                p.1 /= s;
            }
        }
        5 => {
            let s15 = 15f64.sqrt();
            r.push(([1.0 / 3.0; 3], 9.0 / 40.0));
            orbit3((6.0 - s15) / 21.0, (155.0 - s15) / 1200.0, &mut r);
            orbit3((6.0 + s15) / 21.0, (155.0 + s15) / 1200.0, &mut r);
        }
        d => {
            let (tu, wu) = gauss_legendre_unit((d + 2).div_ceil(2));
            let (tv, wv) = gauss_legendre_unit((d + 1).div_ceil(2));
            for (u, a) in tu.iter().zip(&wu) {
                for (v, b) in tv.iter().zip(&wv) {
                    let l1 = *u;
                    let l2 = v * (1.0 - u);
                    r.push(([1.0 - l1 - l2, l1, l2], 2.0 * a * b * (1.0 - u)));
                }
            }
        }
    }
    r
}
