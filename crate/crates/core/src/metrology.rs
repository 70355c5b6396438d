//! Estimators used to verify the generators and impairments.

use num_complex::Complex64;

use crate::dsp::{bin_frequency, fft_forward, hann};
use crate::error::{Error, Result};
use crate::signal::SAMPLE_RATE_HZ;

/// Averaged power spectral density, bins sorted from `-fs/2` upwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub freqs_hz: Vec<f64>,
    /// Power per bin (scaled so the bins sum to the mean signal power).
    pub psd: Vec<f64>,
    pub resolution_hz: f64,
}

impl SpectrumEstimate {
    pub fn total(&self) -> f64 {
        self.psd.iter().sum()
    }

    /// Index of the strongest bin.
    pub fn peak_bin(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.psd.iter().enumerate() {
            if *p > self.psd[best] {
                best = i;
            }
        }
        best
    }
}

pub fn mean_power(x: &[Complex64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Empty);
    }
    Ok(x.iter().map(|s| s.norm_sqr()).sum::<f64>() / x.len() as f64)
}

/// SNR in dB of `noisy` against its clean reference; `+inf` when they match.
pub fn measure_snr(clean: &[Complex64], noisy: &[Complex64]) -> Result<f64> {
    if clean.len() != noisy.len() {
        return Err(Error::InvalidParameter(format!(
            "length mismatch: {} vs {}",
            clean.len(),
            noisy.len()
        )));
    }
    let ps = mean_power(clean)?;
    let pn = clean
        .iter()
        .zip(noisy)
        .map(|(c, n)| (n - c).norm_sqr())
        .sum::<f64>()
        / clean.len() as f64;
    if pn == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (ps / pn).log10())
}

/// Welch estimate with a periodic Hann window and 50% overlap. Segments
/// shorter than `segment` are not used; a single segment is used if the
/// input is shorter than `segment`, zero-padded to it.
pub fn welch_psd(x: &[Complex64], segment: usize, fs: f64) -> Result<SpectrumEstimate> {
    if x.is_empty() {
        return Err(Error::Empty);
    }
    if segment == 0 {
        return Err(Error::InvalidParameter("zero Welch segment".into()));
    }
    let w = hann(segment);
    let wpow = w.iter().map(|v| v * v).sum::<f64>();
    let hop = (segment / 2).max(1);
    let mut acc = vec![0.0; segment];
    let mut count = 0usize;
    let mut start = 0;
    loop {
        let end = (start + segment).min(x.len());
        let mut buf = vec![Complex64::new(0.0, 0.0); segment];
        for (i, s) in x[start..end].iter().enumerate() {
            buf[i] = s * w[i];
        }
        fft_forward(&mut buf);
        for (a, v) in acc.iter_mut().zip(&buf) {
            *a += v.norm_sqr();
        }
        count += 1;
        if start + hop + segment > x.len() {
            break;
        }
        start += hop;
    }
    let scale = 1.0 / (count as f64 * segment as f64 * wpow);
    let half = segment / 2;
    let mut freqs = Vec::with_capacity(segment);
    let mut psd = Vec::with_capacity(segment);
    for j in 0..segment {
        let k = (j + half) % segment;
        freqs.push(bin_frequency(k, segment, fs));
        psd.push(acc[k] * scale);
    }
    Ok(SpectrumEstimate {
        freqs_hz: freqs,
        psd,
        resolution_hz: fs / segment as f64,
    })
}

fn pow2_at_most(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        1 << (usize::BITS - 1 - n.leading_zeros())
    }
}

/// Frequency of the strongest tone, refined by Gaussian interpolation of
/// the Hann-windowed spectrum around the peak bin.
pub fn estimate_tone_frequency(x: &[Complex64]) -> Result<f64> {
    if x.len() < 4 {
        return Err(Error::TooShort { needed: 4, got: x.len() });
    }
    let (f, peak, mean) = hann_peak(x, x.len());
    if !(peak > 20.0 * mean) {
        return Err(Error::NoDominantTone);
    }
    Ok(f)
}

/// Peak frequency of a Hann-windowed segment zero-padded to `n_fft`, with
/// the peak and mean bin powers.
fn hann_peak(x: &[Complex64], n_fft: usize) -> (f64, f64, f64) {
    let w = hann(x.len());
    let mut buf = vec![Complex64::new(0.0, 0.0); n_fft.max(x.len())];
    for (b, (s, w)) in buf.iter_mut().zip(x.iter().zip(&w)) {
        *b = s * w;
    }
    let n = buf.len();
    fft_forward(&mut buf);
    let p: Vec<f64> = buf.iter().map(|v| v.norm_sqr()).collect();
    let (k, peak) = p
        .iter()
        .enumerate()
        .fold((0, 0.0), |b, (i, v)| if *v > b.1 { (i, *v) } else { b });
    let mean = p.iter().sum::<f64>() / n as f64;
    let a = p[(k + n - 1) % n];
    let c = p[(k + 1) % n];
    let delta = if a > 0.0 && c > 0.0 {
        let (la, lb, lc) = (a.ln(), peak.ln(), c.ln());
        let den = la - 2.0 * lb + lc;
        if den != 0.0 {
            (0.5 * (la - lc) / den).clamp(-0.5, 0.5)
        } else {
            0.0
        }
    } else {
        0.0
    };
    let f = bin_frequency(k, n, SAMPLE_RATE_HZ) + delta * SAMPLE_RATE_HZ / n as f64;
    (f, peak, mean)
}

/// Peak frequency of each window of `window` samples, `hop` apart.
pub fn windowed_peak_frequencies(x: &[Complex64], window: usize, hop: usize) -> Result<Vec<f64>> {
    if window < 4 || hop == 0 {
        return Err(Error::InvalidParameter("window must be at least 4 and hop positive".into()));
    }
    if x.len() < window {
        return Err(Error::TooShort { needed: window, got: x.len() });
    }
    let n_fft = (8 * window).next_power_of_two();
    Ok((0..=(x.len() - window) / hop)
        .map(|k| hann_peak(&x[k * hop..k * hop + window], n_fft).0)
        .collect())
}

/// Dominant frequency of every symbol of a keyed signal with known symbol
/// rate. Symbol timing is the offset (in sixteenths of a symbol) whose
/// rectangular-window spectra are most concentrated in one bin.
pub fn symbol_tone_frequencies(x: &[Complex64], baud: f64) -> Result<Vec<f64>> {
    if !(baud > 0.0) {
        return Err(Error::InvalidParameter(format!("baud {baud} must be positive")));
    }
    let t = SAMPLE_RATE_HZ / baud;
    let len = t.round() as usize;
    if len < 4 || x.len() < 2 * len {
        return Err(Error::TooShort { needed: 2 * len.max(4), got: x.len() });
    }
    let starts = |offset: f64| {
        (0..)
            .map(move |j| (offset + j as f64 * t).round() as usize)
            .take_while(|s| s + len <= x.len())
    };
    let mut best = (0.0, f64::NEG_INFINITY);
    for step in 0..16 {
        let offset = step as f64 * t / 16.0;
        let mut score = 0.0;
        for s in starts(offset) {
            let mut buf = x[s..s + len].to_vec();
            fft_forward(&mut buf);
            let p: Vec<f64> = buf.iter().map(|v| v.norm_sqr()).collect();
            let total: f64 = p.iter().sum();
            if total > 0.0 {
                score += p.iter().copied().fold(0.0, f64::max) / total;
            }
        }
        if score > best.1 {
            best = (offset, score);
        }
    }
    // Only the middle 40% of each symbol is measured, away from the
    // transitions.
    let (a, b) = (3 * len / 10, len - 3 * len / 10);
    let n_fft = (16 * len).next_power_of_two();
    Ok(starts(best.0)
        .map(|s| hann_peak(&x[s + a..s + b], n_fft).0)
        .collect())
}

/// Groups frequencies into clusters separated by gaps of at least
/// `min_gap_hz` and keeps those holding at least `min_share` of the values.
/// Returns (median frequency, share) per cluster in ascending frequency.
pub fn tone_clusters(freqs: &[f64], min_gap_hz: f64, min_share: f64) -> Vec<(f64, f64)> {
    let mut f = freqs.to_vec();
    f.sort_by(f64::total_cmp);
    let n = f.len() as f64;
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=f.len() {
        if i == f.len() || f[i] - f[i - 1] >= min_gap_hz {
            let share = (i - start) as f64 / n;
            if share >= min_share {
                out.push((f[start + (i - start) / 2], share));
            }
            start = i;
        }
    }
    out
}

/// Width of the smallest band, centered on the spectral centroid, that
/// holds `fraction` of the power (distance between the outermost bins).
pub fn occupied_bandwidth(x: &[Complex64], fraction: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Empty);
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter(format!("fraction {fraction}")));
    }
    let seg = pow2_at_most(x.len()).clamp(16, 4096);
    let est = welch_psd(x, seg, SAMPLE_RATE_HZ)?;
    Ok(band_around(&est, centroid(&est), fraction))
}

/// Fraction of the power within `bandwidth_hz` centered on `center_hz`.
pub fn band_energy_fraction(x: &[Complex64], center_hz: f64, bandwidth_hz: f64, segment: usize) -> Result<f64> {
    let est = welch_psd(x, segment, SAMPLE_RATE_HZ)?;
    let total = est.total();
    if total == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let inside: f64 = est
        .freqs_hz
        .iter()
        .zip(&est.psd)
        .filter(|(f, _)| (**f - center_hz).abs() <= bandwidth_hz / 2.0)
        .map(|(_, p)| p)
        .sum();
    Ok(inside / total)
}

fn centroid(est: &SpectrumEstimate) -> f64 {
    let total = est.total();
    if total == 0.0 {
        return 0.0;
    }
    est.freqs_hz.iter().zip(&est.psd).map(|(f, p)| f * p).sum::<f64>() / total
}

fn band_around(est: &SpectrumEstimate, center: f64, fraction: f64) -> f64 {
    let total = est.total();
    if total == 0.0 {
        return 0.0;
    }
    // Sort bins by distance from the center and grow the band until it holds
    // the requested fraction.
    let mut order: Vec<(f64, f64)> = est
        .freqs_hz
        .iter()
        .zip(&est.psd)
        .map(|(f, p)| ((f - center).abs(), *p))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = 0.0;
    for (d, p) in order {
        acc += p;
        if acc >= fraction * total {
            return 2.0 * d;
        }
    }
    2.0 * SAMPLE_RATE_HZ
}

/// Two-sided Doppler spread (2σ of the gain spectrum) of a tap-gain record.
///
/// The variance the analysis window adds to a pure tone is subtracted, so a
/// constant gain measures 0.
pub fn estimate_doppler_spread(gain: &[Complex64], fs: f64) -> Result<f64> {
    const MIN_LEN: usize = 1 << 14;
    if gain.len() < MIN_LEN {
        return Err(Error::TooShort { needed: MIN_LEN, got: gain.len() });
    }
    let seg = pow2_at_most(gain.len() / 4).clamp(256, 1 << 20);
    let est = welch_psd(gain, seg, fs)?;
    let total = est.total();
    if total == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let mu = centroid(&est);
    let var = est
        .freqs_hz
        .iter()
        .zip(&est.psd)
        .map(|(f, p)| (f - mu).powi(2) * p)
        .sum::<f64>()
        / total;
    // A bin-centered tone seen through the Hann window puts power 1/16,
    // 1/4, 1/16 on bins -1, 0, 1: second moment 1/3 bin².
    let window_var = (1.0 / 3.0) * est.resolution_hz.powi(2);
    Ok(2.0 * (var - window_var).max(0.0).sqrt())
}

/// Fourth standardized moment minus 3.
pub fn excess_kurtosis(x: &[f64]) -> Result<f64> {
    const MIN_LEN: usize = 10_000;
    if x.len() < MIN_LEN {
        return Err(Error::TooShort { needed: MIN_LEN, got: x.len() });
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for v in x {
        let d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= n;
    m4 /= n;
    if m2 == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(m4 / (m2 * m2) - 3.0)
}

/// Instantaneous frequency (Hz) from successive phase differences;
/// one value per pair of samples.
pub fn instantaneous_frequency(x: &[Complex64]) -> Vec<f64> {
    x.windows(2)
        .map(|w| (w[1] * w[0].conj()).arg() * SAMPLE_RATE_HZ / (2.0 * std::f64::consts::PI))
        .collect()
}

/// Symbol rate of a constant-envelope FSK/MFSK signal, from the spacing of
/// frequency transitions. Runs longer than one symbol are multiples of the
/// symbol time; the shortest cluster of intervals gives the estimate.
pub fn estimate_symbol_rate(x: &[Complex64]) -> Result<f64> {
    let f = instantaneous_frequency(x);
    if f.len() < 16 {
        return Err(Error::TooShort { needed: 17, got: x.len() });
    }
    let d: Vec<f64> = f.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let max = d.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::ZeroVariance);
    }
    // Local maxima of the derivative above a quarter of the largest step.
    let thresh = 0.25 * max;
    let mut peaks: Vec<f64> = Vec::new();
    let mut i = 1;
    while i + 1 < d.len() {
        if d[i] >= thresh && d[i] >= d[i - 1] && d[i] > d[i + 1] {
            // Parabolic refinement of the peak position.
            let (a, b, c) = (d[i - 1], d[i], d[i + 1]);
            let den = a - 2.0 * b + c;
            let off = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
            peaks.push(i as f64 + off);
        }
        i += 1;
    }
    let mut intervals: Vec<f64> = peaks.windows(2).map(|w| w[1] - w[0]).collect();
    if intervals.len() < 8 {
        return Err(Error::InvalidParameter("too few symbol transitions".into()));
    }
    intervals.sort_by(f64::total_cmp);
    let v = intervals[intervals.len() / 10];
    let cluster: Vec<f64> = intervals
        .iter()
        .copied()
        .filter(|t| *t >= 0.75 * v && *t <= 1.25 * v)
        .collect();
    let t = cluster.iter().sum::<f64>() / cluster.len() as f64;
    Ok(SAMPLE_RATE_HZ / t)
}

/// Distance between the two FSK tones: the difference of the dwell
/// frequencies above and below the midpoint of the 5th and 95th
/// percentiles of the instantaneous frequency. The dwell frequency of a side
/// is the middle of the shortest interval holding a fifth of its samples,
/// so partial excursions of short bits do not bias it.
pub fn estimate_fsk_shift(x: &[Complex64]) -> Result<f64> {
    let mut f = instantaneous_frequency(x);
    if f.len() < 100 {
        return Err(Error::TooShort { needed: 101, got: x.len() });
    }
    f.sort_by(f64::total_cmp);
    let n = f.len();
    let center = 0.5 * (f[n / 20] + f[n - 1 - n / 20]);
    let split = f.partition_point(|v| *v <= center);
    if split < 10 || n - split < 10 {
        return Err(Error::ZeroVariance);
    }
    let (lo, hi) = f.split_at(split);
    Ok(dwell(hi) - dwell(lo))
}

/// Middle of the shortest interval covering a fifth of sorted `v`.
fn dwell(v: &[f64]) -> f64 {
    let k = (v.len() / 5).max(1);
    let i = (0..v.len() - k)
        .min_by(|&a, &b| (v[a + k] - v[a]).total_cmp(&(v[b + k] - v[b])))
        .unwrap_or(0);
    0.5 * (v[i] + v[i + k])
}

/// Number of local spectral maxima at least `threshold_db` below the
/// strongest one, separated by at least `min_separation_hz`.
pub fn count_spectral_peaks(est: &SpectrumEstimate, threshold_db: f64, min_separation_hz: f64) -> usize {
    let n = est.psd.len();
    let top = est.psd[est.peak_bin()];
    if top == 0.0 {
        return 0;
    }
    let floor = top * 10f64.powf(-threshold_db.abs() / 10.0);
    let mut cands: Vec<usize> = (1..n.saturating_sub(1))
        .filter(|&i| est.psd[i] >= floor && est.psd[i] >= est.psd[i - 1] && est.psd[i] > est.psd[i + 1])
        .collect();
    cands.sort_by(|a, b| est.psd[*b].total_cmp(&est.psd[*a]));
    let mut kept: Vec<f64> = Vec::new();
    for i in cands {
        let f = est.freqs_hz[i];
        if kept.iter().all(|k| (k - f).abs() >= min_separation_hz) {
            kept.push(f);
        }
    }
    kept.len()
}
