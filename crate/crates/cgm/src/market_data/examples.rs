//! Supervised example construction: movement labels from first-hour volume
//! proportions, feature windows, per-stock scaling, the news vocabulary, and
//! the per-day batches consumed by training.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use super::bars::{HourlyBar, MarketData, NewsRecord};
use crate::error::{CgmError, Result};
use crate::numerics::Matrix;

pub const DEFAULT_WINDOW: usize = 20;
pub const DEFAULT_MOVEMENT_THRESHOLD: f64 = 0.5;
const MIN_STD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Movement {
    Negative = 0,
    Positive = 1,
}

/// Volume of the first trading hour divided by the day's total volume.
pub fn first_hour_proportion(day_bars: &[HourlyBar]) -> Result<f64> {
    let total: f64 = day_bars.iter().map(|b| b.volume).sum();
    if total <= 0.0 {
        return Err(CgmError::DegenerateDay(
            "zero total volume for the day".into(),
        ));
    }
    Ok(day_bars[0].volume / total)
}

/// Standardized deviation of the target value from the history mean, plus
/// the threshold label. History is the n preceding first-hour proportions;
/// the standard deviation uses divisor n-1.
pub fn movement_label(
    history: &[f64],
    target: f64,
    threshold: f64,
) -> Result<(f64, Option<Movement>)> {
    let n = history.len();
    if n < 2 {
        return Err(CgmError::DegenerateWindow(format!(
            "need at least 2 history points, got {n}"
        )));
    }
    let mean = history.iter().sum::<f64>() / n as f64;
    let var = history.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
    let std = var.sqrt();
    if std < MIN_STD {
        return Err(CgmError::DegenerateWindow(
            "history has no variance".into(),
        ));
    }
    let score = (target - mean) / std;
    let label = if score > threshold {
        Some(Movement::Positive)
    } else if score < -threshold {
        Some(Movement::Negative)
    } else {
        None
    };
    Ok((score, label))
}

/// One (stock, target day) supervised instance. Windows cover exactly the n
/// trading days preceding the target day, oldest first.
#[derive(Debug, Clone)]
pub struct MovementExample {
    pub stock_id: usize,
    pub target_day: i32,
    /// n x 4H standardized price features (open, high, low, close per hour).
    pub price_window: Matrix,
    /// n x 2H volume features (standardized log volume, raw hour proportion).
    pub volume_window: Matrix,
    /// Token id sequences of the headlines attached to the target day's eve.
    pub news_tokens: Vec<Vec<usize>>,
    pub label: Option<Movement>,
    pub y_score: f64,
    /// Natural log of the target day's first-hour volume.
    pub log_volume_target: f64,
    /// False when the first-hour volume is zero (no regression target).
    pub has_log_target: bool,
}

impl MovementExample {
    pub fn has_news(&self) -> bool {
        !self.news_tokens.is_empty()
    }
}

/// Per-stock standardization statistics fitted on the training date range.
#[derive(Debug, Clone)]
pub struct FeatureScaler {
    price_mean: Vec<f64>,
    price_std: Vec<f64>,
    vol_mean: Vec<f64>,
    vol_std: Vec<f64>,
}

impl FeatureScaler {
    pub fn fit(market: &MarketData, until_day: i32) -> FeatureScaler {
        let s = market.stock_count();
        let mut price_mean = vec![0.0; s];
        let mut price_std = vec![1.0; s];
        let mut vol_mean = vec![0.0; s];
        let mut vol_std = vec![1.0; s];
        for sid in 0..s {
            let mut prices = Vec::new();
            let mut vols = Vec::new();
            for b in market.bars.iter().filter(|b| b.stock_id == sid && b.day <= until_day) {
                prices.extend_from_slice(&[b.open, b.high, b.low, b.close]);
                vols.push((1.0 + b.volume).ln());
            }
            let (pm, ps) = mean_std(&prices);
            let (vm, vs) = mean_std(&vols);
            price_mean[sid] = pm;
            price_std[sid] = ps;
            vol_mean[sid] = vm;
            vol_std[sid] = vs;
        }
        FeatureScaler { price_mean, price_std, vol_mean, vol_std }
    }

    pub fn scale_price(&self, stock: usize, v: f64) -> f64 {
        (v - self.price_mean[stock]) / self.price_std[stock]
    }

    pub fn scale_volume(&self, stock: usize, v: f64) -> f64 {
        ((1.0 + v).ln() - self.vol_mean[stock]) / self.vol_std[stock]
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 1.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / values.len() as f64;
    let std = var.sqrt();
    (mean, if std < MIN_STD { 1.0 } else { std })
}

/// News token ids. Id 0 is reserved for unknown tokens; the rest are
/// assigned to the sorted unique tokens seen in the fitting range.
#[derive(Debug, Clone)]
pub struct Vocab {
    ids: BTreeMap<String, usize>,
}

pub fn tokenize(headline: &str) -> Vec<String> {
    headline
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

impl Vocab {
    pub fn build(news: &[NewsRecord], until_day: i32) -> Vocab {
        let mut ids = BTreeMap::new();
        for rec in news.iter().filter(|r| r.day <= until_day) {
            for tok in tokenize(&rec.headline) {
                let next = ids.len() + 1;
                ids.entry(tok).or_insert(next);
            }
        }
        // Re-number in sorted token order for a canonical mapping.
        let mut canonical = BTreeMap::new();
        for (i, tok) in ids.keys().enumerate() {
            canonical.insert(tok.clone(), i + 1);
        }
        Vocab { ids: canonical }
    }

    pub fn encode(&self, headline: &str) -> Vec<usize> {
        tokenize(headline)
            .iter()
            .map(|t| self.ids.get(t).copied().unwrap_or(0))
            .collect()
    }

    /// Vocabulary size including the reserved unknown id.
    pub fn size(&self) -> usize {
        self.ids.len() + 1
    }

    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (tok, id) in &self.ids {
            hasher.update(tok.as_bytes());
            hasher.update([0u8]);
            hasher.update(id.to_le_bytes());
        }
        hex_digest(hasher)
    }
}

pub fn hex_digest(hasher: Sha256) -> String {
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone)]
pub struct DatasetConfig {
    pub n: usize,
    pub movement_threshold: f64,
    /// Whether the classification subset additionally requires attached news
    /// (mirrors filtering on datasets where labels are only trusted next to
    /// coverage); label-by-threshold always applies.
    pub require_news: bool,
    pub train_end: i32,
    pub dev_end: i32,
}

/// Example construction output plus bookkeeping counters.
#[derive(Debug)]
pub struct BuildReport {
    pub examples: Vec<MovementExample>,
    pub degenerate_windows: usize,
    pub degenerate_days: usize,
}

/// Builds one example per (stock, day) with a full n-day history; windows
/// are scaled with the supplied scaler and news is attached from the target
/// day's eve (previous trading day).
pub fn build_examples(
    market: &MarketData,
    news: &[NewsRecord],
    config: &DatasetConfig,
    scaler: &FeatureScaler,
    vocab: &Vocab,
) -> Result<BuildReport> {
    let n = config.n;
    if n < 2 {
        return Err(CgmError::Config("window length must be at least 2".into()));
    }
    let hours = market.hours;

    // (stock, day) -> encoded headlines.
    let mut news_index: BTreeMap<(usize, i32), Vec<Vec<usize>>> = BTreeMap::new();
    for rec in news {
        news_index
            .entry((rec.stock_id, rec.day))
            .or_default()
            .push(vocab.encode(&rec.headline));
    }

    let mut examples = Vec::new();
    let mut degenerate_windows = 0usize;
    let mut degenerate_days = 0usize;

    for sid in 0..market.stock_count() {
        let days = market.days_of(sid);
        if days.len() < n + 1 {
            continue;
        }
        // First-hour proportions per day; None marks zero-volume days.
        let proportions: Vec<Option<f64>> = days
            .iter()
            .map(|(_, bars)| first_hour_proportion(bars).ok())
            .collect();

        for t in n..days.len() {
            let window = &days[t - n..t];
            let mut props = Vec::with_capacity(n);
            let mut degenerate = false;
            for k in (t - n)..t {
                match proportions[k] {
                    Some(p) => props.push(p),
                    None => {
                        degenerate = true;
                        break;
                    }
                }
            }
            if degenerate {
                degenerate_days += 1;
                continue;
            }
            let target_prop = match proportions[t] {
                Some(p) => p,
                None => {
                    degenerate_days += 1;
                    continue;
                }
            };
            let (y_score, label) =
                match movement_label(&props, target_prop, config.movement_threshold) {
                    Ok(v) => v,
                    Err(CgmError::DegenerateWindow(_)) => {
                        degenerate_windows += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };

            let mut price_window = Matrix::zeros(n, 4 * hours);
            let mut volume_window = Matrix::zeros(n, 2 * hours);
            for (row, (_, bars)) in window.iter().enumerate() {
                let total: f64 = bars.iter().map(|b| b.volume).sum();
                for (h, b) in bars.iter().enumerate() {
                    price_window.set(row, 4 * h, scaler.scale_price(sid, b.open));
                    price_window.set(row, 4 * h + 1, scaler.scale_price(sid, b.high));
                    price_window.set(row, 4 * h + 2, scaler.scale_price(sid, b.low));
                    price_window.set(row, 4 * h + 3, scaler.scale_price(sid, b.close));
                    volume_window.set(row, 2 * h, scaler.scale_volume(sid, b.volume));
                    volume_window.set(row, 2 * h + 1, b.volume / total);
                }
            }

            let target_day = days[t].0;
            let eve_day = days[t - 1].0;
            let news_tokens = news_index
                .get(&(sid, eve_day))
                .cloned()
                .unwrap_or_default();

            let first_hour_volume = days[t].1[0].volume;
            let has_log_target = first_hour_volume > 0.0;
            examples.push(MovementExample {
                stock_id: sid,
                target_day,
                price_window,
                volume_window,
                news_tokens,
                label,
                y_score,
                log_volume_target: if has_log_target {
                    first_hour_volume.ln()
                } else {
                    f64::NEG_INFINITY
                },
                has_log_target,
            });
        }
    }

    examples.sort_by_key(|e| (e.target_day, e.stock_id));
    Ok(BuildReport { examples, degenerate_windows, degenerate_days })
}

/// All examples of one target day stacked into per-timestep matrices over
/// the full stock universe. Stocks without a valid example on the day
/// contribute zero features and are masked out of every loss.
#[derive(Debug, Clone)]
pub struct DayBatch {
    pub target_day: i32,
    /// n matrices of shape S x 4H, oldest timestep first.
    pub price_steps: Vec<Matrix>,
    /// n matrices of shape S x 2H.
    pub vol_steps: Vec<Matrix>,
    /// Headline token sequences per stock (empty when no news).
    pub news: Vec<Vec<Vec<usize>>>,
    /// Classification targets (class index) after subset filtering.
    pub class_labels: Vec<Option<usize>>,
    pub reg_targets: Vec<f64>,
    pub reg_mask: Vec<bool>,
    pub has_news: Vec<bool>,
    /// Stocks with a valid example on this day.
    pub present: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub fn name(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }
}

/// A fully prepared dataset: examples grouped into day batches, chronological
/// splits, vocabulary, and a content hash for manifests.
#[derive(Debug)]
pub struct Dataset {
    pub stock_names: Vec<String>,
    pub hours: usize,
    pub config: DatasetConfig,
    pub vocab: Vocab,
    pub batches: Vec<DayBatch>,
    pub degenerate_windows: usize,
    pub degenerate_days: usize,
    content_hash: String,
}

impl Dataset {
    pub fn build(
        market: &MarketData,
        news: &[NewsRecord],
        config: DatasetConfig,
    ) -> Result<Dataset> {
        let scaler = FeatureScaler::fit(market, config.train_end);
        let vocab = Vocab::build(news, config.train_end);
        let report = build_examples(market, news, &config, &scaler, &vocab)?;
        let s = market.stock_count();
        let hours = market.hours;
        let n = config.n;

        let mut batches: Vec<DayBatch> = Vec::new();
        let mut current: Option<DayBatch> = None;
        for ex in &report.examples {
            let need_new = match &current {
                Some(b) => b.target_day != ex.target_day,
                None => true,
            };
            if need_new {
                if let Some(b) = current.take() {
                    batches.push(b);
                }
                current = Some(DayBatch {
                    target_day: ex.target_day,
                    price_steps: (0..n).map(|_| Matrix::zeros(s, 4 * hours)).collect(),
                    vol_steps: (0..n).map(|_| Matrix::zeros(s, 2 * hours)).collect(),
                    news: vec![Vec::new(); s],
                    class_labels: vec![None; s],
                    reg_targets: vec![0.0; s],
                    reg_mask: vec![false; s],
                    has_news: vec![false; s],
                    present: vec![false; s],
                });
            }
            let b = current.as_mut().unwrap();
            let sid = ex.stock_id;
            for step in 0..n {
                b.price_steps[step]
                    .row_mut(sid)
                    .copy_from_slice(ex.price_window.row(step));
                b.vol_steps[step]
                    .row_mut(sid)
                    .copy_from_slice(ex.volume_window.row(step));
            }
            b.news[sid] = ex.news_tokens.clone();
            b.has_news[sid] = ex.has_news();
            b.present[sid] = true;
            let in_subset = ex.label.is_some() && (!config.require_news || ex.has_news());
            if in_subset {
                b.class_labels[sid] = ex.label.map(|l| l as usize);
            }
            if ex.has_log_target {
                b.reg_targets[sid] = ex.log_volume_target;
                b.reg_mask[sid] = true;
            }
        }
        if let Some(b) = current.take() {
            batches.push(b);
        }

        let mut hasher = Sha256::new();
        for b in &batches {
            hasher.update(b.target_day.to_le_bytes());
            for m in b.price_steps.iter().chain(&b.vol_steps) {
                for v in m.data() {
                    hasher.update(v.to_le_bytes());
                }
            }
            for (labels, mask) in [(&b.class_labels, &b.present)] {
                for (l, p) in labels.iter().zip(mask.iter()) {
                    hasher.update([l.map(|v| v as u8 + 1).unwrap_or(0), *p as u8]);
                }
            }
        }
        let content_hash = hex_digest(hasher);

        Ok(Dataset {
            stock_names: market.stock_names.clone(),
            hours,
            config,
            vocab,
            batches,
            degenerate_windows: report.degenerate_windows,
            degenerate_days: report.degenerate_days,
            content_hash,
        })
    }

    pub fn stock_count(&self) -> usize {
        self.stock_names.len()
    }

    pub fn split_of(&self, target_day: i32) -> Split {
        if target_day <= self.config.train_end {
            Split::Train
        } else if target_day <= self.config.dev_end {
            Split::Dev
        } else {
            Split::Test
        }
    }

    pub fn split_batches(&self, split: Split) -> Vec<&DayBatch> {
        self.batches
            .iter()
            .filter(|b| self.split_of(b.target_day) == split)
            .collect()
    }

    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }

    pub fn labeled_count(&self, split: Split) -> usize {
        self.split_batches(split)
            .iter()
            .map(|b| b.class_labels.iter().flatten().count())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_data::synth::{synth_generate, SynthConfig};

    fn flat_bar(day: i32, hour: usize, volume: f64) -> HourlyBar {
        HourlyBar {
            stock_id: 0,
            day,
            hour,
            open: 10.0,
            high: 11.0,
            low: 9.0,
            close: 10.5,
            volume,
        }
    }

    #[test]
    fn proportion_uniform_and_concentrated() {
        let day: Vec<HourlyBar> = (0..5).map(|h| flat_bar(100, h, 10.0)).collect();
        assert!((first_hour_proportion(&day).unwrap() - 0.2).abs() < 1e-15);

        let mut day2: Vec<HourlyBar> = (0..5).map(|h| flat_bar(100, h, 0.0)).collect();
        day2[0].volume = 50.0;
        assert!((first_hour_proportion(&day2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn proportion_direct_arithmetic() {
        let vols = [3.0, 1.0, 2.0, 2.0, 2.0];
        let day: Vec<HourlyBar> = vols
            .iter()
            .enumerate()
            .map(|(h, &v)| flat_bar(100, h, v))
            .collect();
        assert!((first_hour_proportion(&day).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn zero_volume_day_is_degenerate() {
        let day: Vec<HourlyBar> = (0..5).map(|h| flat_bar(100, h, 0.0)).collect();
        assert!(matches!(
            first_hour_proportion(&day),
            Err(CgmError::DegenerateDay(_))
        ));
    }

    #[test]
    fn movement_label_hand_case() {
        // history (0.2, 0.4); target 0.5: mean 0.3, sd 0.1414..., score 1.414...
        let (score, label) = movement_label(&[0.2, 0.4], 0.5, 0.5).unwrap();
        assert!((score - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(label, Some(Movement::Positive));
    }

    #[test]
    fn movement_label_zero_score_unlabeled() {
        let (score, label) = movement_label(&[0.1, 0.3], 0.2, 0.5).unwrap();
        assert_eq!(score, 0.0);
        assert_eq!(label, None);
    }

    #[test]
    fn movement_label_constant_series_rejected() {
        assert!(matches!(
            movement_label(&[0.25; 10], 0.3, 0.5),
            Err(CgmError::DegenerateWindow(_))
        ));
    }

    #[test]
    fn movement_label_scale_invariant() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(40);
        for _ in 0..50 {
            let n = rng.gen_range(2..30);
            let hist: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.9)).collect();
            let target = rng.gen_range(0.05..0.9);
            let c = rng.gen_range(0.1..10.0);
            let (s1, _) = match movement_label(&hist, target, 0.5) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let scaled: Vec<f64> = hist.iter().map(|v| v * c).collect();
            let (s2, _) = movement_label(&scaled, target * c, 0.5).unwrap();
            assert!((s1 - s2).abs() < 1e-10 * s1.abs().max(1.0));
        }
    }

    fn toy_dataset_config(train_end: i32, dev_end: i32) -> DatasetConfig {
        DatasetConfig {
            n: DEFAULT_WINDOW,
            movement_threshold: DEFAULT_MOVEMENT_THRESHOLD,
            require_news: true,
            train_end,
            dev_end,
        }
    }

    #[test]
    fn twenty_one_days_yield_one_candidate_per_stock() {
        let cfg = SynthConfig {
            stocks: 3,
            days: 21,
            hours: 5,
            window: 5, // validation floor only
            ..SynthConfig::default()
        };
        let out = synth_generate(&cfg).unwrap();
        let days = out.market.trading_days();
        let dcfg = toy_dataset_config(days[days.len() - 1], days[days.len() - 1]);
        let scaler = FeatureScaler::fit(&out.market, dcfg.train_end);
        let vocab = Vocab::build(&out.news, dcfg.train_end);
        let report = build_examples(&out.market, &out.news, &dcfg, &scaler, &vocab).unwrap();
        // One full 20-day window per stock.
        assert_eq!(report.examples.len() + report.degenerate_windows, 3);
    }

    #[test]
    fn below_threshold_examples_do_not_enter_classification_subset() {
        // has news, |score| below the default threshold
        let cfg = DatasetConfig {
            n: 3,
            movement_threshold: 0.5,
            require_news: true,
            train_end: i32::MAX,
            dev_end: i32::MAX,
        };
        let _ = cfg;
        let (score, label) = movement_label(&[0.2, 0.3, 0.4], 0.31, 0.5).unwrap();
        assert!(score.abs() < 0.5);
        assert_eq!(label, None);
    }

    #[test]
    fn example_count_matches_brute_force_enumeration() {
        let cfg = SynthConfig {
            stocks: 3,
            days: 30,
            hours: 5,
            window: 5,
            ..SynthConfig::default()
        };
        let out = synth_generate(&cfg).unwrap();
        let days = out.market.trading_days();
        let dcfg = DatasetConfig {
            n: 5,
            movement_threshold: 0.5,
            require_news: true,
            train_end: days[20],
            dev_end: days[25],
        };
        let scaler = FeatureScaler::fit(&out.market, dcfg.train_end);
        let vocab = Vocab::build(&out.news, dcfg.train_end);
        let report = build_examples(&out.market, &out.news, &dcfg, &scaler, &vocab).unwrap();

        // Brute force: count (stock, day) pairs with n prior days, a
        // non-degenerate proportion window, and a defined target proportion.
        let mut expected = 0usize;
        for sid in 0..out.market.stock_count() {
            let per_day = out.market.days_of(sid);
            for t in 5..per_day.len() {
                let props: Option<Vec<f64>> = per_day[t - 5..=t]
                    .iter()
                    .map(|(_, bars)| first_hour_proportion(bars).ok())
                    .collect();
                if let Some(props) = props {
                    let hist = &props[..5];
                    if movement_label(hist, props[5], 0.5).is_ok() {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(report.examples.len(), expected);
        assert!(report.examples.len() > 0);
    }

    #[test]
    fn build_is_order_invariant_and_has_no_lookahead() {
        let cfg = SynthConfig {
            stocks: 4,
            days: 40,
            hours: 3,
            window: 5,
            ..SynthConfig::default()
        };
        let out = synth_generate(&cfg).unwrap();
        let days = out.market.trading_days();
        let dcfg = DatasetConfig {
            n: 5,
            movement_threshold: 0.5,
            require_news: true,
            train_end: days[25],
            dev_end: days[30],
        };
        let scaler = FeatureScaler::fit(&out.market, dcfg.train_end);
        let vocab = Vocab::build(&out.news, dcfg.train_end);
        let base = build_examples(&out.market, &out.news, &dcfg, &scaler, &vocab).unwrap();

        // Reversed record order must produce identical examples.
        let mut named: Vec<(String, HourlyBar)> = out
            .market
            .bars
            .iter()
            .map(|b| (out.market.stock_names[b.stock_id].clone(), b.clone()))
            .collect();
        named.reverse();
        let market2 = MarketData::assemble(named).unwrap();
        let again = build_examples(&market2, &out.news, &dcfg, &scaler, &vocab).unwrap();
        assert_eq!(base.examples.len(), again.examples.len());
        for (a, b) in base.examples.iter().zip(&again.examples) {
            assert_eq!(a.price_window, b.price_window);
            assert_eq!(a.volume_window, b.volume_window);
            assert_eq!(a.label, b.label);
        }

        // Perturbing a bar after the training range changes no window of any
        // example whose target day precedes the perturbed day.
        let mut market3 = out.market.clone();
        let last_day = *days.last().unwrap();
        for b in market3.bars.iter_mut() {
            if b.day == last_day {
                b.volume *= 7.0;
            }
        }
        let third = build_examples(&market3, &out.news, &dcfg, &scaler, &vocab).unwrap();
        for (a, b) in base.examples.iter().zip(&third.examples) {
            if a.target_day < last_day {
                assert_eq!(a.price_window, b.price_window);
                assert_eq!(a.volume_window, b.volume_window);
                assert_eq!(a.y_score, b.y_score);
            }
        }
    }

    #[test]
    fn label_counts_partition_candidates() {
        let cfg = SynthConfig {
            stocks: 5,
            days: 60,
            hours: 5,
            window: 10,
            ..SynthConfig::default()
        };
        let out = synth_generate(&cfg).unwrap();
        let days = out.market.trading_days();
        let dcfg = DatasetConfig {
            n: 10,
            movement_threshold: 0.5,
            require_news: false,
            train_end: days[40],
            dev_end: days[50],
        };
        let scaler = FeatureScaler::fit(&out.market, dcfg.train_end);
        let vocab = Vocab::build(&out.news, dcfg.train_end);
        let report = build_examples(&out.market, &out.news, &dcfg, &scaler, &vocab).unwrap();
        let pos = report
            .examples
            .iter()
            .filter(|e| e.label == Some(Movement::Positive))
            .count();
        let neg = report
            .examples
            .iter()
            .filter(|e| e.label == Some(Movement::Negative))
            .count();
        let none = report.examples.iter().filter(|e| e.label.is_none()).count();
        assert_eq!(pos + neg + none, report.examples.len());
        assert!(pos > 0 && neg > 0);
    }

    #[test]
    fn vocab_maps_unknown_tokens_to_reserved_id() {
        let news = vec![NewsRecord {
            stock_id: 0,
            day: 10,
            headline: "Alpha wins major contract".into(),
        }];
        let vocab = Vocab::build(&news, 10);
        assert_eq!(vocab.size(), 5);
        let ids = vocab.encode("alpha loses contract");
        assert!(ids[0] > 0);
        assert_eq!(ids[1], 0); // "loses" unseen
        assert!(ids[2] > 0);
    }
}
