//! Statistical evaluation: adjacent-pixel correlation, Shannon entropy,
//! NPCR, byte histograms with a chi-square uniformity statistic, and the
//! key-sensitivity experiment.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::chaos::SecretKey;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::pipeline::{decrypt, encrypt, CipherBlob};

/// Pairs sampled per direction by default.
pub const DEFAULT_PAIRS: usize = 1000;

/// Degrees of freedom of the 256-bin uniformity test.
pub const HISTOGRAM_DOF: u32 = 255;

/// Sample Pearson coefficient of `(x, y)` pairs.
pub fn correlation(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::Domain(format!(
            "correlation needs at least 2 pairs, got {}",
            pairs.len()
        )));
    }
    let n = pairs.len() as f64;
    let (sx, sy) = pairs.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (mut cov, mut vx, mut vy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        let (dx, dy) = (x - mx, y - my);
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx == 0.0 || vy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((cov / (vx.sqrt() * vy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
    /// Neighbor at (+1, +1).
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Horizontal, Direction::Vertical, Direction::Diagonal];

    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (0, 1),
            Direction::Vertical => (1, 0),
            Direction::Diagonal => (1, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
            Direction::Diagonal => "diagonal",
        }
    }
}

/// Position sampler: ChaCha8 seeded through `seed_from_u64`, whose output
/// stream is fixed across rand_chacha releases.
pub fn sample_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws `count` random positions and pairs each pixel with its neighbor
/// in `direction`.
pub fn sample_adjacent_pairs(
    image: &GrayImage,
    direction: Direction,
    count: usize,
    seed: u64,
) -> Result<Vec<(u8, u8)>> {
    if count == 0 {
        return Err(Error::Domain("pair count must be positive".into()));
    }
    let (dr, dc) = direction.offset();
    let (rows, cols) = (image.rows() - dr, image.cols() - dc);
    let mut rng = sample_rng(seed);
    Ok((0..count)
        .map(|_| {
            let r = rng.random_range(0..rows);
            let c = rng.random_range(0..cols);
            (image.get(r, c), image.get(r + dr, c + dc))
        })
        .collect())
}

/// Correlation of `count` seeded adjacent pairs.
pub fn adjacent_correlation(image: &GrayImage, direction: Direction, count: usize, seed: u64) -> Result<f64> {
    let pairs: Vec<(f64, f64)> = sample_adjacent_pairs(image, direction, count, seed)?
        .into_iter()
        .map(|(x, y)| (f64::from(x), f64::from(y)))
        .collect();
    correlation(&pairs)
}

/// Shannon entropy in bits per byte. Empty input has entropy 0.
pub fn entropy(bytes: &[u8]) -> f64 {
    Histogram::of(bytes).entropy()
}

/// Percentage of positions at which `a` and `b` differ.
pub fn npcr(a: &[u8], b: &[u8]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("npcr over {} vs {} samples", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::Domain("npcr of empty inputs".into()));
    }
    let diff = a.iter().zip(b).filter(|(x, y)| x != y).count();
    Ok(100.0 * diff as f64 / a.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; 256],
}

impl Histogram {
    pub fn of(bytes: &[u8]) -> Self {
        let mut counts = [0u64; 256];
        for &b in bytes {
            counts[b as usize] += 1;
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&self, other: &Histogram) -> Histogram {
        let mut counts = self.counts;
        for (c, o) in counts.iter_mut().zip(other.counts.iter()) {
            *c += o;
        }
        Histogram { counts }
    }

    pub fn entropy(&self) -> f64 {
        let n = self.total() as f64;
        if n == 0.0 {
            return 0.0;
        }
        -self
            .counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                p * p.log2()
            })
            .sum::<f64>()
    }

    /// `Σ (o - e)² / e` against the uniform expectation `e = n / 256`.
    pub fn chi_square(&self) -> f64 {
        let e = self.total() as f64 / 256.0;
        if e == 0.0 {
            return 0.0;
        }
        self.counts.iter().map(|&o| (o as f64 - e).powi(2) / e).sum()
    }

    /// Upper-tail probability of the chi-square statistic with 255 degrees
    /// of freedom.
    pub fn p_value(&self) -> f64 {
        let dist = ChiSquared::new(f64::from(HISTOGRAM_DOF)).expect("positive dof");
        dist.sf(self.chi_square())
    }

    pub fn is_uniform_at(&self, significance: f64) -> bool {
        self.p_value() > significance
    }
}

/// Critical value of χ²(255) at a given upper-tail significance.
pub fn chi_square_critical(significance: f64) -> f64 {
    ChiSquared::new(f64::from(HISTOGRAM_DOF))
        .expect("positive dof")
        .inverse_cdf(1.0 - significance)
}

/// Statistics of one image or cipher stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// Adjacent-pixel correlations; `None` where a sample has zero variance.
    pub horizontal: Option<f64>,
    pub vertical: Option<f64>,
    pub diagonal: Option<f64>,
    pub entropy: f64,
    /// NPCR against the reference image, when there is one.
    pub npcr: Option<f64>,
    pub histogram: Vec<u64>,
    pub chi_square: f64,
    pub dof: u32,
    pub p_value: f64,
    pub pairs: usize,
    pub seed: u64,
}

impl MetricsReport {
    /// `pixels` is the plane sampled for correlation and compared for NPCR;
    /// `symbols` feeds the histogram and entropy.
    fn build(
        pixels: &GrayImage,
        symbols: &[u8],
        reference: Option<&GrayImage>,
        pairs: usize,
        seed: u64,
    ) -> Result<Self> {
        let corr = |d| match adjacent_correlation(pixels, d, pairs, seed) {
            Ok(v) => Ok(Some(v)),
            Err(Error::UndefinedCorrelation) => Ok(None),
            Err(e) => Err(e),
        };
        let hist = Histogram::of(symbols);
        Ok(Self {
            horizontal: corr(Direction::Horizontal)?,
            vertical: corr(Direction::Vertical)?,
            diagonal: corr(Direction::Diagonal)?,
            entropy: hist.entropy(),
            npcr: reference.map(|r| npcr(r.pixels(), pixels.pixels())).transpose()?,
            chi_square: hist.chi_square(),
            dof: HISTOGRAM_DOF,
            p_value: hist.p_value(),
            histogram: hist.counts.to_vec(),
            pairs,
            seed,
        })
    }

    /// Plain image statistics, optionally compared against a reference.
    pub fn for_image(image: &GrayImage, reference: Option<&GrayImage>, pairs: usize, seed: u64) -> Result<Self> {
        Self::build(image, image.pixels(), reference, pairs, seed)
    }

    /// Cipher statistics: histogram and entropy over the whole payload,
    /// correlation and NPCR over the display plane.
    pub fn for_cipher(blob: &CipherBlob, plain: &GrayImage, pairs: usize, seed: u64) -> Result<Self> {
        if (blob.rows(), blob.cols()) != (plain.rows(), plain.cols()) {
            return Err(Error::Shape("cipher and plain image sizes differ".into()));
        }
        Self::build(&blob.display_plane(), blob.payload(), Some(plain), pairs, seed)
    }

    pub fn correlation(&self, direction: Direction) -> Option<f64> {
        match direction {
            Direction::Horizontal => self.horizontal,
            Direction::Vertical => self.vertical,
            Direction::Diagonal => self.diagonal,
        }
    }
}

/// Encrypts with `key`, decrypts with `x0 + delta`, and reports on the
/// resulting image against the plain one.
pub fn key_sensitivity(
    image: &GrayImage,
    key: &SecretKey,
    delta: f64,
    pairs: usize,
    seed: u64,
) -> Result<MetricsReport> {
    let wrong = key.with_x0(key.x0 + delta);
    wrong.validate()?;
    let blob = encrypt(image, key)?;
    let recovered = decrypt(&blob, &wrong)?;
    MetricsReport::for_image(&recovered, Some(image), pairs, seed)
}

/// Everything `analyze` reports for one plain/cipher pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub image: String,
    pub plain: MetricsReport,
    pub cipher: MetricsReport,
    /// Wrong-key decryption at `x0 + key_delta`, when a key was supplied.
    pub key_sensitivity: Option<MetricsReport>,
    pub key_delta: f64,
}

/// Perturbation of `x0` used by the key-sensitivity experiment.
pub const KEY_DELTA: f64 = 1e-14;

impl Analysis {
    pub fn run(
        name: &str,
        plain: &GrayImage,
        blob: &CipherBlob,
        key: Option<&SecretKey>,
        pairs: usize,
        seed: u64,
    ) -> Result<Self> {
        let wrong = match key {
            Some(k) => {
                let wrong = k.with_x0(k.x0 + KEY_DELTA);
                wrong.validate()?;
                let recovered = decrypt(blob, &wrong)?;
                Some(MetricsReport::for_image(&recovered, Some(plain), pairs, seed)?)
            }
            None => None,
        };
        Ok(Self {
            image: name.to_string(),
            plain: MetricsReport::for_image(plain, None, pairs, seed)?,
            cipher: MetricsReport::for_cipher(blob, plain, pairs, seed)?,
            key_sensitivity: wrong,
            key_delta: KEY_DELTA,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Report(e.to_string()))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut rows = vec![
            (self.image.as_str(), "plain", &self.plain),
            (self.image.as_str(), "cipher", &self.cipher),
        ];
        if let Some(w) = &self.key_sensitivity {
            rows.push((self.image.as_str(), "wrong_key", w));
        }
        write_report_csv(out, &rows)
    }
}

/// Writes one row per scalar metric: `image,subject,metric,value`.
pub fn write_report_csv<W: Write>(out: W, rows: &[(&str, &str, &MetricsReport)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Report(e.to_string());
    w.write_record(["image", "subject", "metric", "value"])
        .map_err(csv_err)?;
    for (image, subject, r) in rows {
        let mut emit = |metric: &str, value: Option<f64>| {
            let v = value.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([*image, *subject, metric, v.as_str()]).map_err(csv_err)
        };
        emit("corr_horizontal", r.horizontal)?;
        emit("corr_vertical", r.vertical)?;
        emit("corr_diagonal", r.diagonal)?;
        emit("entropy", Some(r.entropy))?;
        emit("npcr", r.npcr)?;
        emit("chi_square", Some(r.chi_square))?;
        emit("chi_square_p", Some(r.p_value))?;
    }
    w.flush()?;
    Ok(())
}

/// Histogram dump: `value,<label>...` with one count column per series.
pub fn write_histograms_csv<W: Write>(out: W, series: &[(&str, &[u64])]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Report(e.to_string());
    let mut header = vec!["value".to_string()];
    header.extend(series.iter().map(|(l, _)| l.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for v in 0..256 {
        let mut row = vec![v.to_string()];
        row.extend(series.iter().map(|(_, h)| h.get(v).copied().unwrap_or(0).to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Scatter dump of adjacent pairs: `direction,x,y`.
pub fn write_pairs_csv<W: Write>(out: W, image: &GrayImage, count: usize, seed: u64) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Report(e.to_string());
    w.write_record(["direction", "x", "y"]).map_err(csv_err)?;
    for d in Direction::ALL {
        for (x, y) in sample_adjacent_pairs(image, d, count, seed)? {
            w.write_record([d.name(), &x.to_string(), &y.to_string()])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn correlation_examples() {
        let up: Vec<(f64, f64)> = (0..10).map(|i| (f64::from(i), f64::from(i))).collect();
        assert!((correlation(&up).unwrap() - 1.0).abs() < 1e-12);
        let down: Vec<(f64, f64)> = (0..10).map(|i| (f64::from(i), -f64::from(i))).collect();
        assert!((correlation(&down).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(correlation(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap(), 0.0);
        assert!(matches!(
            correlation(&[(1.0, 2.0), (1.0, 3.0)]),
            Err(Error::UndefinedCorrelation)
        ));
        assert!(matches!(correlation(&[(1.0, 2.0)]), Err(Error::Domain(_))));
    }

    #[test]
    fn sampling_is_seeded() {
        let img = GrayImage::from_fn(16, 16, |r, c| (r * 16 + c) as u8).unwrap();
        let a = sample_adjacent_pairs(&img, Direction::Diagonal, 50, 9).unwrap();
        assert_eq!(a, sample_adjacent_pairs(&img, Direction::Diagonal, 50, 9).unwrap());
        assert_ne!(a, sample_adjacent_pairs(&img, Direction::Diagonal, 50, 10).unwrap());
        for (x, y) in a {
            assert_eq!(y, x + 17);
        }
        for (x, y) in sample_adjacent_pairs(&img, Direction::Vertical, 50, 1).unwrap() {
            assert_eq!(y, x + 16);
        }
        for (x, y) in sample_adjacent_pairs(&img, Direction::Horizontal, 50, 1).unwrap() {
            assert_eq!(y, x + 1);
        }
        assert!(matches!(
            sample_adjacent_pairs(&img, Direction::Vertical, 0, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn constant_image_has_undefined_correlation() {
        let img = GrayImage::new(4, 4, vec![9; 16]).unwrap();
        assert!(matches!(
            adjacent_correlation(&img, Direction::Horizontal, 100, 0),
            Err(Error::UndefinedCorrelation)
        ));
        let r = MetricsReport::for_image(&img, None, 100, 0).unwrap();
        assert_eq!(r.horizontal, None);
    }

    #[test]
    fn entropy_examples() {
        let all: Vec<u8> = (0..=255).cycle().take(256 * 4).collect();
        assert!((entropy(&all) - 8.0).abs() < 1e-12);
        assert_eq!(entropy(&[42; 100]), 0.0);
        assert_eq!(entropy(&[]), 0.0);
        assert!((entropy(&[0, 1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn npcr_examples() {
        assert_eq!(npcr(&[1, 2, 3], &[1, 2, 3]).unwrap(), 0.0);
        assert_eq!(npcr(&[1, 2, 3], &[0, 0, 0]).unwrap(), 100.0);
        assert_eq!(npcr(&[1, 2, 3, 4], &[1, 0, 3, 0]).unwrap(), 50.0);
        assert!(matches!(npcr(&[1], &[1, 2]), Err(Error::Shape(_))));
    }

    #[test]
    fn chi_square_examples() {
        let flat: Vec<u8> = (0..=255).cycle().take(256 * 10).collect();
        let h = Histogram::of(&flat);
        assert_eq!(h.chi_square(), 0.0);
        assert!(h.is_uniform_at(0.001));

        let constant = Histogram::of(&[7; 2560]);
        // one bin holds all n, the rest are empty: (n - e)²/e + 255·e = 255·n
        assert!((constant.chi_square() - 255.0 * 2560.0).abs() < 1e-6);
        assert!(!constant.is_uniform_at(0.001));

        let crit = chi_square_critical(0.001);
        assert!((crit - 330.52).abs() < 0.01, "{crit}");
    }

    #[test]
    fn uniform_noise_chi_square_near_dof() {
        // the statistic should sit near its mean of 255
        let mut rng = sample_rng(12345);
        let mut total = 0.0;
        let trials = 50;
        for _ in 0..trials {
            let bytes: Vec<u8> = (0..256 * 64).map(|_| rng.random::<u8>()).collect();
            total += Histogram::of(&bytes).chi_square();
        }
        let mean = total / f64::from(trials);
        // sd of χ²(255) is ~22.6, so the mean of 50 has sd ~3.2
        assert!((mean - 255.0).abs() < 16.0, "{mean}");
    }

    #[test]
    fn merged_uniform_histograms_stay_uniform() {
        let mut rng = sample_rng(3);
        let mut draw = || (0..256 * 40).map(|_| rng.random::<u8>()).collect::<Vec<_>>();
        let (a, b) = (Histogram::of(&draw()), Histogram::of(&draw()));
        let merged = a.merge(&b);
        assert_eq!(merged.total(), a.total() + b.total());
        assert!(merged.is_uniform_at(0.001));
    }

    #[test]
    fn report_serializes() {
        let img = GrayImage::from_fn(8, 8, |r, c| (r * 31 + c * 5) as u8).unwrap();
        let r = MetricsReport::for_image(&img, Some(&img), 50, 0).unwrap();
        assert_eq!(r.npcr, Some(0.0));
        assert_eq!(r.histogram.iter().sum::<u64>(), 64);
        let json = serde_json::to_string(&r).unwrap();
        let back: MetricsReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);

        let mut buf = Vec::new();
        write_report_csv(&mut buf, &[("img", "plain", &r)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 7);
        assert!(text.contains("img,plain,npcr,0\n"));
    }

    #[test]
    fn analysis_round_trips_through_json() {
        let img = GrayImage::from_fn(8, 8, |r, c| (r * 29 + c * 3) as u8).unwrap();
        let key = SecretKey::default();
        let blob = encrypt(&img, &key).unwrap();
        let a = Analysis::run("g", &img, &blob, Some(&key), 40, 1).unwrap();
        assert_eq!(a.cipher.histogram.iter().sum::<u64>(), 4 * 64);
        let back: Analysis = serde_json::from_str(&a.to_json().unwrap()).unwrap();
        assert_eq!(back, a);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 3 * 7);
        assert!(Analysis::run("g", &img, &blob, None, 40, 1)
            .unwrap()
            .key_sensitivity
            .is_none());
    }

    fn pairs_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0.0f64..255.0, 0.0f64..255.0), 3..200)
    }

    proptest! {
        #[test]
        fn correlation_symmetry_and_affine_invariance(pairs in pairs_strategy(), a in 0.1f64..10.0, b in -100.0f64..100.0) {
            let Ok(r) = correlation(&pairs) else { return Ok(()) };
            prop_assert!(r.abs() <= 1.0);
            let swapped: Vec<_> = pairs.iter().map(|&(x, y)| (y, x)).collect();
            prop_assert!((correlation(&swapped).unwrap() - r).abs() <= 1e-12);
            let scaled: Vec<_> = pairs.iter().map(|&(x, y)| (a * x + b, a * y + b)).collect();
            prop_assert!((correlation(&scaled).unwrap() - r).abs() <= 1e-12);
        }

        #[test]
        fn entropy_permutation_invariant(mut bytes in prop::collection::vec(any::<u8>(), 1..500)) {
            let h = entropy(&bytes);
            prop_assert!((0.0..=8.0).contains(&h));
            bytes.reverse();
            bytes.sort_unstable();
            prop_assert!((entropy(&bytes) - h).abs() < 1e-12);
        }

        #[test]
        fn npcr_symmetric(a in prop::collection::vec(any::<u8>(), 1..300), seed in any::<u8>()) {
            let b: Vec<u8> = a.iter().map(|&x| x.wrapping_add(seed & 3)).collect();
            prop_assert_eq!(npcr(&a, &b).unwrap(), npcr(&b, &a).unwrap());
            prop_assert_eq!(npcr(&a, &a).unwrap(), 0.0);
            let v = npcr(&a, &b).unwrap();
            prop_assert!((0.0..=100.0).contains(&v));
        }
    }
}
