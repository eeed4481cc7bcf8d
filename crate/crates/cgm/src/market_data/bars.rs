//! Hourly OHLCV bars and news headlines: the on-disk formats and their
//! validating loaders.
//!
//! Bars CSV: header `stock,day,hour,open,high,low,close,volume`, day as an
//! ISO date. News JSONL: one object per line with `stock`, `day`,
//! `headline`. Writers emit records in sorted order so that identical data
//! always produces identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{CgmError, Result};

/// One stock-hour OHLCV record. `day` is a date ordinal (days since the
/// common era) so that chronological arithmetic is plain integer work.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyBar {
    pub stock_id: usize,
    pub day: i32,
    pub hour: usize,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub volume: f64,
}

impl HourlyBar {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(self.open > 0.0 && self.high > 0.0 && self.low > 0.0 && self.close > 0.0) {
            return Err("prices must be positive".into());
        }
        if self.volume < 0.0 {
            return Err("volume must be non-negative".into());
        }
        let lo = self.open.min(self.close);
        let hi = self.open.max(self.close);
        if self.low > lo || hi > self.high {
            return Err(format!(
                "OHLC ordering violated: low {} min(o,c) {} max(o,c) {} high {}",
                self.low, lo, hi, self.high
            ));
        }
        Ok(())
    }
}

/// A bar universe: sorted stock names (index = stock id) plus bars sorted by
/// (stock, day, hour) with a fixed per-dataset hour count.
#[derive(Debug, Clone)]
pub struct MarketData {
    pub stock_names: Vec<String>,
    pub bars: Vec<HourlyBar>,
    pub hours: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewsRecord {
    pub stock_id: usize,
    pub day: i32,
    pub headline: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct NewsLine {
    stock: String,
    day: String,
    headline: String,
}

pub fn day_to_date(day: i32) -> NaiveDate {
    NaiveDate::from_num_days_from_ce_opt(day).expect("day ordinal out of range")
}

pub fn date_to_day(date: NaiveDate) -> i32 {
    date.num_days_from_ce()
}

pub fn parse_date(s: &str) -> Result<i32> {
    let date = NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|e| CgmError::Validation(format!("bad date {s:?}: {e}")))?;
    Ok(date_to_day(date))
}

impl MarketData {
    /// Builds a universe from loose records: names are sorted and ids
    /// assigned, bars sorted, hour structure and OHLC invariants checked.
    pub fn assemble(named_bars: Vec<(String, HourlyBar)>) -> Result<MarketData> {
        let mut names: Vec<String> = named_bars.iter().map(|(n, _)| n.clone()).collect();
        names.sort();
        names.dedup();
        let index: BTreeMap<&str, usize> =
            names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();

        let mut bars: Vec<HourlyBar> = named_bars
            .into_iter()
            .map(|(name, mut bar)| {
                bar.stock_id = index[name.as_str()];
                bar
            })
            .collect();
        bars.sort_by_key(|b| (b.stock_id, b.day, b.hour));

        for b in &bars {
            b.validate().map_err(|m| {
                CgmError::Validation(format!(
                    "stock {} day {} hour {}: {m}",
                    names[b.stock_id],
                    day_to_date(b.day),
                    b.hour
                ))
            })?;
        }

        // Hours within each (stock, day) must be contiguous from zero and
        // share one per-dataset count.
        let mut hours = 0usize;
        let mut i = 0;
        while i < bars.len() {
            let (sid, day) = (bars[i].stock_id, bars[i].day);
            let mut j = i;
            while j < bars.len() && bars[j].stock_id == sid && bars[j].day == day {
                if bars[j].hour != j - i {
                    return Err(CgmError::Validation(format!(
                        "stock {} day {}: hours not contiguous from 0",
                        names[sid],
                        day_to_date(day)
                    )));
                }
                j += 1;
            }
            let count = j - i;
            if hours == 0 {
                hours = count;
            } else if count != hours {
                return Err(CgmError::Validation(format!(
                    "stock {} day {}: {count} hourly bars, dataset uses {hours}",
                    names[sid],
                    day_to_date(day)
                )));
            }
            i = j;
        }

        Ok(MarketData { stock_names: names, bars, hours })
    }

    pub fn stock_count(&self) -> usize {
        self.stock_names.len()
    }

    /// Sorted unique trading days across the universe.
    pub fn trading_days(&self) -> Vec<i32> {
        let mut days: Vec<i32> = self.bars.iter().map(|b| b.day).collect();
        days.sort_unstable();
        days.dedup();
        days
    }

    /// Bars of one stock grouped per day (sorted by day, hours in order).
    pub fn days_of(&self, stock_id: usize) -> Vec<(i32, &[HourlyBar])> {
        let lo = self.bars.partition_point(|b| b.stock_id < stock_id);
        let hi = self.bars.partition_point(|b| b.stock_id <= stock_id);
        let slice = &self.bars[lo..hi];
        let mut out = Vec::new();
        let mut i = 0;
        while i < slice.len() {
            let day = slice[i].day;
            let mut j = i;
            while j < slice.len() && slice[j].day == day {
                j += 1;
            }
            out.push((day, &slice[i..j]));
            i = j;
        }
        out
    }
}

fn fmt_float(v: f64) -> String {
    format!("{v}")
}

pub fn write_bars(path: &Path, market: &MarketData) -> Result<()> {
    let mut out = String::from("stock,day,hour,open,high,low,close,volume\n");
    for b in &market.bars {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            market.stock_names[b.stock_id],
            day_to_date(b.day),
            b.hour,
            fmt_float(b.open),
            fmt_float(b.high),
            fmt_float(b.low),
            fmt_float(b.close),
            fmt_float(b.volume),
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn load_bars(path: &Path) -> Result<MarketData> {
    let text = fs::read_to_string(path)?;
    let mut named = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            if line.trim() != "stock,day,hour,open,high,low,close,volume" {
                return Err(CgmError::Parse {
                    line: 1,
                    message: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(CgmError::Parse {
                line: lineno + 1,
                message: format!("expected 8 fields, found {}", fields.len()),
            });
        }
        let parse_f = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| CgmError::Parse {
                line: lineno + 1,
                message: format!("bad {what} {s:?}"),
            })
        };
        let day = NaiveDate::parse_from_str(fields[1], "%Y-%m-%d").map_err(|_| CgmError::Parse {
            line: lineno + 1,
            message: format!("bad date {:?}", fields[1]),
        })?;
        let hour = fields[2].parse::<usize>().map_err(|_| CgmError::Parse {
            line: lineno + 1,
            message: format!("bad hour {:?}", fields[2]),
        })?;
        let bar = HourlyBar {
            stock_id: 0, // assigned during assembly
            day: date_to_day(day),
            hour,
            open: parse_f(fields[3], "open")?,
            high: parse_f(fields[4], "high")?,
            low: parse_f(fields[5], "low")?,
            close: parse_f(fields[6], "close")?,
            volume: parse_f(fields[7], "volume")?,
        };
        named.push((fields[0].to_string(), bar));
    }
    if named.is_empty() {
        return Ok(MarketData { stock_names: Vec::new(), bars: Vec::new(), hours: 0 });
    }
    MarketData::assemble(named)
}

pub fn write_news(path: &Path, market: &MarketData, news: &[NewsRecord]) -> Result<()> {
    let mut sorted: Vec<&NewsRecord> = news.iter().collect();
    sorted.sort_by(|a, b| {
        (a.stock_id, a.day, &a.headline).cmp(&(b.stock_id, b.day, &b.headline))
    });
    let mut file = fs::File::create(path)?;
    for n in sorted {
        let line = NewsLine {
            stock: market.stock_names[n.stock_id].clone(),
            day: day_to_date(n.day).to_string(),
            headline: n.headline.clone(),
        };
        let json = serde_json::to_string(&line)
            .map_err(|e| CgmError::Validation(format!("news serialization: {e}")))?;
        writeln!(file, "{json}")?;
    }
    Ok(())
}

pub fn load_news(path: &Path, market: &MarketData) -> Result<Vec<NewsRecord>> {
    let text = fs::read_to_string(path)?;
    let index: BTreeMap<&str, usize> = market
        .stock_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: NewsLine = serde_json::from_str(line).map_err(|e| CgmError::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let stock_id = *index.get(parsed.stock.as_str()).ok_or_else(|| CgmError::Parse {
            line: lineno + 1,
            message: format!("unknown stock {:?}", parsed.stock),
        })?;
        if parsed.headline.trim().is_empty() {
            return Err(CgmError::Validation(format!(
                "line {}: empty headline",
                lineno + 1
            )));
        }
        out.push(NewsRecord {
            stock_id,
            day: parse_date(&parsed.day)?,
            headline: parsed.headline.trim().to_string(),
        });
    }
    out.sort_by(|a, b| (a.stock_id, a.day, &a.headline).cmp(&(b.stock_id, b.day, &b.headline)));
    Ok(out)
}
