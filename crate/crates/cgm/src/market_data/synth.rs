//! Synthetic market generator with planted structure.
//!
//! Stocks are partitioned into latent-factor groups. Daily log volume loads
//! a shared per-group factor (plus noise) and daily log returns load a
//! second per-group factor with alternating signs, so the long-term
//! correlation graph of the generated data is known in advance. News events
//! and group factor surges push the next day's first-hour volume share up,
//! which is what the movement label measures.

use chrono::{Datelike, NaiveDate, Weekday};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::bars::{date_to_day, HourlyBar, MarketData, NewsRecord};
use crate::error::{CgmError, Result};
use crate::relation_graph::RelationTag;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub stocks: usize,
    pub days: usize,
    pub hours: usize,
    pub factors: usize,
    /// Window length the dataset is meant to be consumed with; generation
    /// must cover at least window + 2 days.
    pub window: usize,
    /// First-hour log-volume boost on the day after a stock's own news.
    pub news_strength: f64,
    /// Same-day boost for group mates of a news-bearing stock.
    pub news_spillover: f64,
    /// Per (stock, day) probability of a news event.
    pub news_prob: f64,
    /// Standard deviation of idiosyncratic log-volume / return noise,
    /// relative to the unit factor loading.
    pub noise: f64,
    /// Intraday jitter of hourly volume shares (log scale).
    pub proportion_noise: f64,
    /// First-hour boost on the day after the group volume factor exceeds
    /// `factor_event_z`; zero disables the channel.
    pub factor_event_strength: f64,
    pub factor_event_z: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            stocks: 10,
            days: 60,
            hours: 5,
            factors: 2,
            window: 20,
            news_strength: 0.8,
            news_spillover: 0.0,
            news_prob: 0.1,
            noise: 0.1,
            proportion_noise: 0.05,
            factor_event_strength: 0.0,
            factor_event_z: 0.0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedEdge {
    pub relation: RelationTag,
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

#[derive(Debug)]
pub struct SynthOutput {
    pub market: MarketData,
    pub news: Vec<NewsRecord>,
    pub truth: Vec<PlantedEdge>,
}

/// Group index of a stock under a contiguous-block partition.
pub fn factor_group(stock: usize, stocks: usize, factors: usize) -> usize {
    let size = stocks.div_ceil(factors);
    stock / size
}

/// Sign of the price-factor loading: alternates inside each group so that
/// both positive and negative price relations are planted.
pub fn price_sign(stock: usize, stocks: usize, factors: usize) -> f64 {
    let size = stocks.div_ceil(factors);
    if (stock % size) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn weekdays_from(start: NaiveDate, count: usize) -> Vec<i32> {
    let mut days = Vec::with_capacity(count);
    let mut d = start;
    while days.len() < count {
        if d.weekday() != Weekday::Sat && d.weekday() != Weekday::Sun {
            days.push(date_to_day(d));
        }
        d = d.succ_opt().expect("date overflow");
    }
    days
}

pub fn synth_generate(config: &SynthConfig) -> Result<SynthOutput> {
    if config.stocks < 2 {
        return Err(CgmError::Config(format!(
            "need at least 2 stocks, got {}",
            config.stocks
        )));
    }
    if config.days < config.window + 2 {
        return Err(CgmError::Config(format!(
            "need at least window + 2 = {} days, got {}",
            config.window + 2,
            config.days
        )));
    }
    if config.hours == 0 {
        return Err(CgmError::Config("need at least 1 hour per day".into()));
    }
    if config.factors == 0 || config.factors > config.stocks {
        return Err(CgmError::Config(format!(
            "factor count {} must be in 1..=stocks",
            config.factors
        )));
    }
    if !(0.0..=1.0).contains(&config.news_prob) {
        return Err(CgmError::Config("news probability must be in [0, 1]".into()));
    }

    let s = config.stocks;
    let d = config.days;
    let h = config.hours;
    let k = config.factors;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let normal = StandardNormal;
    let mut draw = |rng: &mut ChaCha8Rng| -> f64 { normal.sample(rng) };

    let dates = weekdays_from(NaiveDate::from_ymd_opt(2015, 1, 5).unwrap(), d);
    let names: Vec<String> = (0..s).map(|i| format!("S{i:03}")).collect();

    // Factor paths (volume and price), then per-stock idiosyncrasies, then
    // news, then intraday structure — a fixed draw order keeps the output
    // bitwise reproducible for a given seed.
    let vol_factor: Vec<Vec<f64>> =
        (0..k).map(|_| (0..d).map(|_| draw(&mut rng)).collect()).collect();
    let price_factor: Vec<Vec<f64>> =
        (0..k).map(|_| (0..d).map(|_| draw(&mut rng)).collect()).collect();

    let base_log_volume: Vec<f64> = (0..s).map(|_| rng.gen_range(8.0..12.0)).collect();
    let base_log_price: Vec<f64> =
        (0..s).map(|_| rng.gen_range(20.0_f64.ln()..500.0_f64.ln())).collect();

    let mut log_volume = vec![vec![0.0; d]; s];
    let mut log_price = vec![vec![0.0; d]; s];
    for sid in 0..s {
        let g = factor_group(sid, s, k);
        let psign = price_sign(sid, s, k);
        let mut lp = base_log_price[sid];
        for day in 0..d {
            log_volume[sid][day] =
                base_log_volume[sid] + vol_factor[g][day] + config.noise * draw(&mut rng);
            let ret = 0.02 * (psign * price_factor[g][day] + config.noise * draw(&mut rng));
            lp += ret;
            log_price[sid][day] = lp;
        }
    }

    // News events; the record day is the eve, the boost lands next day.
    let verbs = ["announces", "reports", "faces", "wins", "expands", "settles"];
    let objects = [
        "merger",
        "record earnings",
        "major lawsuit",
        "supply agreement",
        "breakthrough product",
        "regulatory probe",
        "large buyback",
        "guidance revision",
    ];
    let mut news = Vec::new();
    let mut has_news = vec![vec![false; d]; s];
    for sid in 0..s {
        for day in 0..d {
            if rng.gen::<f64>() < config.news_prob {
                has_news[sid][day] = true;
                let v = verbs[rng.gen_range(0..verbs.len())];
                let o = objects[rng.gen_range(0..objects.len())];
                news.push(NewsRecord {
                    stock_id: sid,
                    day: dates[day],
                    headline: format!("{} {} {}", names[sid], v, o),
                });
            }
        }
    }

    // First-hour boosts per (stock, day).
    let mut boost = vec![vec![0.0; d]; s];
    for sid in 0..s {
        let g = factor_group(sid, s, k);
        for day in 1..d {
            let eve = day - 1;
            let mut b = 0.0;
            if config.factor_event_strength > 0.0 && vol_factor[g][eve] > config.factor_event_z {
                b += config.factor_event_strength;
            }
            if has_news[sid][eve] {
                b += config.news_strength;
            }
            if config.news_spillover > 0.0 {
                let group_news = (0..s).any(|o| {
                    o != sid && factor_group(o, s, k) == g && has_news[o][eve]
                });
                if group_news {
                    b += config.news_spillover;
                }
            }
            boost[sid][day] = b;
        }
    }

    // Intraday realization.
    let mut named_bars = Vec::with_capacity(s * d * h);
    for sid in 0..s {
        for day in 0..d {
            let total_volume = log_volume[sid][day].exp();
            let mut shares = Vec::with_capacity(h);
            for hour in 0..h {
                let jitter = config.proportion_noise * draw(&mut rng);
                let log_u = if hour == 0 { boost[sid][day] + jitter } else { jitter };
                shares.push(log_u.exp());
            }
            let share_sum: f64 = shares.iter().sum();

            let prev_close = if day == 0 {
                base_log_price[sid].exp()
            } else {
                log_price[sid][day - 1].exp()
            };
            let close_today = log_price[sid][day].exp();
            let log_step = (close_today / prev_close).ln() / h as f64;

            let mut open = prev_close;
            for hour in 0..h {
                let close = if hour == h - 1 {
                    close_today
                } else {
                    let wiggle = 0.003 * draw(&mut rng);
                    prev_close * ((hour as f64 + 1.0) * log_step + wiggle).exp()
                };
                let span = 0.002 * draw(&mut rng).abs();
                let high = open.max(close) * (1.0 + span);
                let low = open.min(close) * (1.0 - span);
                named_bars.push((
                    names[sid].clone(),
                    HourlyBar {
                        stock_id: 0,
                        day: dates[day],
                        hour,
                        open,
                        high,
                        low,
                        close,
                        volume: total_volume * shares[hour] / share_sum,
                    },
                ));
                open = close;
            }
        }
    }

    let market = MarketData::assemble(named_bars)?;

    // Planted relations: every same-group pair correlates in volume
    // (positively) and in price (sign product of the loadings).
    let mut truth = Vec::new();
    for a in 0..s {
        for b in (a + 1)..s {
            if factor_group(a, s, k) != factor_group(b, s, k) {
                continue;
            }
            truth.push(PlantedEdge {
                relation: RelationTag::VolPos,
                a,
                b,
                weight: 1.0,
            });
            let sign = price_sign(a, s, k) * price_sign(b, s, k);
            truth.push(PlantedEdge {
                relation: if sign > 0.0 { RelationTag::PricePos } else { RelationTag::PriceNeg },
                a,
                b,
                weight: sign,
            });
        }
    }
    truth.sort_by_key(|e| (e.relation as usize, e.a, e.b));

    Ok(SynthOutput { market, news, truth })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_seed_is_bitwise_reproducible() {
        let cfg = SynthConfig { stocks: 4, days: 25, window: 20, ..SynthConfig::default() };
        let a = synth_generate(&cfg).unwrap();
        let b = synth_generate(&cfg).unwrap();
        assert_eq!(a.market.bars, b.market.bars);
        assert_eq!(a.news, b.news);
        assert_eq!(a.truth, b.truth);
    }

    #[test]
    fn invalid_configs_rejected() {
        let cfg = SynthConfig { stocks: 1, ..SynthConfig::default() };
        assert!(matches!(synth_generate(&cfg), Err(CgmError::Config(_))));
        let cfg = SynthConfig { stocks: 5, days: 10, window: 20, ..SynthConfig::default() };
        assert!(matches!(synth_generate(&cfg), Err(CgmError::Config(_))));
    }

    #[test]
    fn degenerate_generator_has_identical_proportions() {
        let cfg = SynthConfig {
            stocks: 3,
            days: 23,
            window: 20,
            factors: 1,
            news_prob: 0.0,
            news_strength: 0.0,
            noise: 0.0,
            proportion_noise: 0.0,
            factor_event_strength: 0.0,
            ..SynthConfig::default()
        };
        let out = synth_generate(&cfg).unwrap();
        for sid in 0..3 {
            for (_, bars) in out.market.days_of(sid) {
                let total: f64 = bars.iter().map(|b| b.volume).sum();
                let p = bars[0].volume / total;
                assert!((p - 0.2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shared_factor_without_noise_gives_unit_correlation() {
        let cfg = SynthConfig {
            stocks: 2,
            days: 40,
            window: 20,
            factors: 1,
            noise: 0.0,
            news_prob: 0.0,
            ..SynthConfig::default()
        };
        let out = synth_generate(&cfg).unwrap();
        // Daily total volumes of the two stocks.
        let mut v = vec![Vec::new(), Vec::new()];
        for sid in 0..2 {
            for (_, bars) in out.market.days_of(sid) {
                v[sid].push(bars.iter().map(|b| b.volume).sum::<f64>());
            }
        }
        let corr = crate::relation_graph::pearson(&v[0], &v[1]).unwrap();
        assert!((corr - 1.0).abs() < 1e-9, "corr {corr}");
    }

    #[test]
    fn group_partition_and_signs() {
        assert_eq!(factor_group(0, 30, 3), 0);
        assert_eq!(factor_group(9, 30, 3), 0);
        assert_eq!(factor_group(10, 30, 3), 1);
        assert_eq!(factor_group(29, 30, 3), 2);
        assert_eq!(price_sign(0, 30, 3), 1.0);
        assert_eq!(price_sign(1, 30, 3), -1.0);
        assert_eq!(price_sign(10, 30, 3), 1.0);
    }
}
