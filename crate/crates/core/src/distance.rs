//! Distances between step distribution functions.

use crate::step::StepCdf;
use crate::summation::compensated_sum;

/// Walks the merged knot set of two step CDFs, yielding each merged knot with
/// the values of both functions at (and right of) it.
fn merged_levels<'a>(a: &'a StepCdf, b: &'a StepCdf) -> impl Iterator<Item = (f64, f64, f64)> + 'a {
    let (ka, la) = (a.knots(), a.levels());
    let (kb, lb) = (b.knots(), b.levels());
    let (mut i, mut j) = (0usize, 0usize);
    let (mut fa, mut fb) = (0.0, 0.0);
    std::iter::from_fn(move || {
        let next_a = ka.get(i).copied();
        let next_b = kb.get(j).copied();
        let t = match (next_a, next_b) {
            (None, None) => return None,
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (Some(x), Some(y)) => x.min(y),
        };
        if next_a == Some(t) {
            fa = la[i];
            i += 1;
        }
        if next_b == Some(t) {
            fb = lb[j];
            j += 1;
        }
        Some((t, fa, fb))
    })
}

/// `∫ |a(x) - b(x)| dx`, exact up to floating-point rounding.
///
/// Both functions are constant between consecutive merged knots and agree
/// (at 0 and at 1) outside the merged range, so the integral is a finite sum
/// of `|level gap| * knot gap`.
pub fn l1_distance(a: &StepCdf, b: &StepCdf) -> f64 {
    let mut prev: Option<(f64, f64)> = None;
    let terms = merged_levels(a, b).filter_map(|(t, fa, fb)| {
        let term = prev.map(|(t0, gap)| gap * (t - t0));
        prev = Some((t, (fa - fb).abs()));
        term
    });
    compensated_sum(terms)
}

/// `sup_x |a(x) - b(x)|`. Left limits at a knot equal the right values at
/// the previous merged knot, so checking right values covers both sides.
pub fn sup_distance(a: &StepCdf, b: &StepCdf) -> f64 {
    merged_levels(a, b).map(|(_, fa, fb)| (fa - fb).abs()).fold(0.0, f64::max)
}
