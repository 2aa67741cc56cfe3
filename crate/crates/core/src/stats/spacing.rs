use super::curve::{CurveKind, StatCurve};
use super::unfold::UnfoldedSpectrum;
use crate::error::{invalid, Error, Result};

/// Histogram bin width in units of the mean spacing.
pub const DEFAULT_BIN_WIDTH: f64 = 0.1;

fn pooled_spacings(u: &UnfoldedSpectrum) -> Result<Vec<f64>> {
    let s = u.spacings();
    if s.is_empty() {
        return Err(Error::InsufficientData("no sequence has two or more levels".into()));
    }
    Ok(s)
}

/// Histogram `P(s)` of nearest-neighbour spacings normalised to unit area.
/// Bins start at zero; abscissae are bin centres.
pub fn spacing_distribution(u: &UnfoldedSpectrum, bin_width: f64) -> Result<StatCurve> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return invalid(format!("bin width must be positive, got {bin_width}"));
    }
    let s = pooled_spacings(u)?;
    let max = s.iter().copied().fold(0.0, f64::max);
    let bins = (max / bin_width).floor() as usize + 1;
    let mut counts = vec![0u64; bins];
    for &x in &s {
        counts[((x / bin_width).floor() as usize).min(bins - 1)] += 1;
    }
    let norm = 1.0 / (s.len() as f64 * bin_width);
    let abscissa = (0..bins).map(|i| (i as f64 + 0.5) * bin_width).collect();
    let ordinate = counts.iter().map(|&c| c as f64 * norm).collect();
    let mut curve = StatCurve::new(CurveKind::Histogram, abscissa, ordinate)?;
    curve.counts = Some(counts);
    Ok(curve)
}

/// Empirical cumulative spacing distribution `I(s)`.
pub fn cumulative_spacing(u: &UnfoldedSpectrum) -> Result<StatCurve> {
    let mut s = pooled_spacings(u)?;
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut abscissa = Vec::with_capacity(s.len());
    let mut ordinate = Vec::with_capacity(s.len());
    for (i, &x) in s.iter().enumerate() {
        if abscissa.last() == Some(&x) {
            *ordinate.last_mut().unwrap() = (i + 1) as f64 / n;
        } else {
            abscissa.push(x);
            ordinate.push((i + 1) as f64 / n);
        }
    }
    StatCurve::new(CurveKind::EmpiricalCdf, abscissa, ordinate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{generate_reference_sequence, Model};
    use proptest::prelude::*;

    #[test]
    fn poisson_cumulative_at_one() {
        let u = generate_reference_sequence(Model::Poisson, 10_000, 1).unwrap();
        let i = cumulative_spacing(&u).unwrap();
        assert!((i.value_at(1.0, false) - (1.0 - (-1f64).exp())).abs() < 0.01);
    }

    #[test]
    fn semi_poisson_cumulative_at_half() {
        let u = generate_reference_sequence(Model::SemiPoisson, 10_000, 2).unwrap();
        let i = cumulative_spacing(&u).unwrap();
        assert!((i.value_at(0.5, false) - 0.2642).abs() < 0.02);
    }

    #[test]
    fn degenerate_levels_single_bin() {
        let u = UnfoldedSpectrum::single(vec![3.0; 5], "flat").unwrap();
        let p = spacing_distribution(&u, 0.1).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.counts.unwrap(), vec![4]);
        let i = cumulative_spacing(&u).unwrap();
        assert_eq!(i.abscissa, vec![0.0]);
        assert_eq!(i.ordinate, vec![1.0]);
    }

    #[test]
    fn no_spacings_across_sequences() {
        let u = UnfoldedSpectrum::new(vec![vec![0.0, 1.0], vec![100.0, 101.0]], "two").unwrap();
        let p = spacing_distribution(&u, 0.5).unwrap();
        assert_eq!(p.counts.unwrap().iter().sum::<u64>(), 2);
        assert!(spacing_distribution(&UnfoldedSpectrum::single(vec![1.0], "one").unwrap(), 0.1).is_err());
    }

    proptest! {
        #[test]
        fn histogram_has_unit_area(gaps in proptest::collection::vec(0.0f64..5.0, 2..200), bw in 0.01f64..1.0) {
            let mut x = 0.0;
            let levels: Vec<f64> = gaps.iter().map(|g| { x += g; x }).collect();
            let u = UnfoldedSpectrum::single(levels, "p").unwrap();
            let p = spacing_distribution(&u, bw).unwrap();
            let area: f64 = p.ordinate.iter().sum::<f64>() * bw;
            prop_assert!((area - 1.0).abs() < 1e-12);
            prop_assert!(p.ordinate.iter().all(|&y| y >= 0.0));
            let i = cumulative_spacing(&u).unwrap();
            prop_assert!(i.ordinate.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(*i.ordinate.last().unwrap(), 1.0);
        }
    }
}
