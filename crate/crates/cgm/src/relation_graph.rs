//! Long-term multi-relation stock graph built from historical price and
//! volume series, plus its symmetric normalization.
//!
//! Correlation inputs are daily close-to-close log returns (price side) and
//! first differences of log(1 + daily volume) (volume side): differencing
//! removes the trend component that would otherwise correlate everything
//! with everything.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{CgmError, Result};
use crate::market_data::MarketData;
use crate::numerics::{sym_eig, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelationTag {
    PricePos = 0,
    PriceNeg = 1,
    VolPos = 2,
    VolNeg = 3,
}

pub const ALL_RELATIONS: [RelationTag; 4] = [
    RelationTag::PricePos,
    RelationTag::PriceNeg,
    RelationTag::VolPos,
    RelationTag::VolNeg,
];

impl RelationTag {
    pub fn name(&self) -> &'static str {
        match self {
            RelationTag::PricePos => "price_pos",
            RelationTag::PriceNeg => "price_neg",
            RelationTag::VolPos => "vol_pos",
            RelationTag::VolNeg => "vol_neg",
        }
    }

    pub fn parse(s: &str) -> Result<RelationTag> {
        match s {
            "price_pos" => Ok(RelationTag::PricePos),
            "price_neg" => Ok(RelationTag::PriceNeg),
            "vol_pos" => Ok(RelationTag::VolPos),
            "vol_neg" => Ok(RelationTag::VolNeg),
            other => Err(CgmError::Validation(format!("unknown relation {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationMethod {
    Pearson,
    Spearman,
}

/// Pearson product-moment correlation of two equal-length series.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(CgmError::Dimension(format!(
            "pearson: series lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(CgmError::InsufficientHistory(format!(
            "pearson: need at least 3 points, got {}",
            x.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(CgmError::UndefinedCorrelation(
            "constant series has no correlation".into(),
        ));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman rank correlation: Pearson on average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    pearson(&ranks(x), &ranks(y))
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Four signed adjacency structures over the stock universe. Each adjacency
/// is symmetric with a zero diagonal, weights are the correlation values,
/// and a pair lands in at most one price and one volume relation.
#[derive(Debug, Clone)]
pub struct RelationGraph {
    pub stock_count: usize,
    pub relations: BTreeMap<RelationTag, Matrix>,
    pub threshold: f64,
    /// Stock pairs skipped because one series was constant.
    pub skipped_pairs: usize,
}

impl RelationGraph {
    pub fn edge_count(&self, tag: RelationTag) -> usize {
        let m = &self.relations[&tag];
        let mut count = 0;
        for i in 0..self.stock_count {
            for j in (i + 1)..self.stock_count {
                if m.get(i, j) != 0.0 {
                    count += 1;
                }
            }
        }
        count
    }

    /// Undirected edge set of one relation as (a, b, weight) with a < b.
    pub fn edges(&self, tag: RelationTag) -> Vec<(usize, usize, f64)> {
        let m = &self.relations[&tag];
        let mut out = Vec::new();
        for i in 0..self.stock_count {
            for j in (i + 1)..self.stock_count {
                let w = m.get(i, j);
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }
}

/// Builds the relation graph from aligned per-stock series. An edge is
/// created when |correlation| reaches the threshold; the sign picks the
/// relation, the raw correlation value is kept as the weight.
pub fn build_graph(
    price_series: &[Vec<f64>],
    volume_series: &[Vec<f64>],
    threshold: f64,
    method: CorrelationMethod,
) -> Result<RelationGraph> {
    if !(0.0 < threshold && threshold < 1.0) {
        return Err(CgmError::Config(format!(
            "correlation threshold {threshold} must be in (0, 1)"
        )));
    }
    let s = price_series.len();
    if volume_series.len() != s {
        return Err(CgmError::Dimension(
            "price and volume series cover different stock counts".into(),
        ));
    }
    let len = price_series.first().map(|v| v.len()).unwrap_or(0);
    if len < 3 {
        return Err(CgmError::InsufficientHistory(format!(
            "graph building needs at least 3 aligned observations, got {len}"
        )));
    }
    for series in price_series.iter().chain(volume_series) {
        if series.len() != len {
            return Err(CgmError::Dimension(
                "series are not aligned on the same days".into(),
            ));
        }
    }

    let corr = match method {
        CorrelationMethod::Pearson => pearson,
        CorrelationMethod::Spearman => spearman,
    };

    let mut relations: BTreeMap<RelationTag, Matrix> = ALL_RELATIONS
        .iter()
        .map(|t| (*t, Matrix::zeros(s, s)))
        .collect();
    let mut skipped = 0usize;

    let mut place = |pos: RelationTag, neg: RelationTag, i: usize, j: usize, c: f64| {
        if c >= threshold {
            let m = relations.get_mut(&pos).unwrap();
            m.set(i, j, c);
            m.set(j, i, c);
        } else if c <= -threshold {
            let m = relations.get_mut(&neg).unwrap();
            m.set(i, j, c);
            m.set(j, i, c);
        }
    };

    for i in 0..s {
        for j in (i + 1)..s {
            match corr(&price_series[i], &price_series[j]) {
                Ok(c) => place(RelationTag::PricePos, RelationTag::PriceNeg, i, j, c),
                Err(CgmError::UndefinedCorrelation(_)) => skipped += 1,
                Err(e) => return Err(e),
            }
            match corr(&volume_series[i], &volume_series[j]) {
                Ok(c) => place(RelationTag::VolPos, RelationTag::VolNeg, i, j, c),
                Err(CgmError::UndefinedCorrelation(_)) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }

    Ok(RelationGraph { stock_count: s, relations, threshold, skipped_pairs: skipped })
}

/// Extracts the long-term correlation inputs from bar data, using only days
/// up to `until_day` so that graph edges never see evaluation data.
pub fn series_from_market(
    market: &MarketData,
    until_day: i32,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let s = market.stock_count();
    let mut price = Vec::with_capacity(s);
    let mut volume = Vec::with_capacity(s);
    for sid in 0..s {
        let days = market.days_of(sid);
        let mut closes = Vec::new();
        let mut vols = Vec::new();
        for (day, bars) in days {
            if day > until_day {
                break;
            }
            closes.push(bars.last().unwrap().close);
            vols.push((1.0 + bars.iter().map(|b| b.volume).sum::<f64>()).ln());
        }
        let returns: Vec<f64> = closes.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
        let diffs: Vec<f64> = vols.windows(2).map(|w| w[1] - w[0]).collect();
        price.push(returns);
        volume.push(diffs);
    }
    Ok((price, volume))
}

/// Per-relation symmetric normalization on absolute weights:
/// `D^(-1/2) |A| D^(-1/2)`, with isolated nodes producing zero rows.
#[derive(Debug, Clone)]
pub struct NormalizedAdjacency {
    pub stock_count: usize,
    pub relations: BTreeMap<RelationTag, Matrix>,
}

impl NormalizedAdjacency {
    /// All-zero operators (graph-free ablations).
    pub fn zeros(stock_count: usize) -> NormalizedAdjacency {
        NormalizedAdjacency {
            stock_count,
            relations: ALL_RELATIONS
                .iter()
                .map(|t| (*t, Matrix::zeros(stock_count, stock_count)))
                .collect(),
        }
    }
}

pub fn normalize(graph: &RelationGraph) -> NormalizedAdjacency {
    let s = graph.stock_count;
    let mut relations = BTreeMap::new();
    for (tag, adj) in &graph.relations {
        let mut degree = vec![0.0; s];
        for i in 0..s {
            for j in 0..s {
                degree[i] += adj.get(i, j).abs();
            }
        }
        let inv_sqrt: Vec<f64> = degree
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
            .collect();
        let normalized = Matrix::from_fn(s, s, |i, j| {
            inv_sqrt[i] * adj.get(i, j).abs() * inv_sqrt[j]
        });
        relations.insert(*tag, normalized);
    }
    NormalizedAdjacency { stock_count: s, relations }
}

/// TSV export: `relation<TAB>stock_a<TAB>stock_b<TAB>weight`, sorted.
pub fn write_graph(path: &Path, graph: &RelationGraph, names: &[String]) -> Result<()> {
    let mut out = String::new();
    for tag in ALL_RELATIONS {
        for (a, b, w) in graph.edges(tag) {
            out.push_str(&format!("{}\t{}\t{}\t{}\n", tag.name(), names[a], names[b], w));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn load_graph(path: &Path, names: &[String], threshold: f64) -> Result<RelationGraph> {
    let text = fs::read_to_string(path)?;
    let index: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let s = names.len();
    let mut relations: BTreeMap<RelationTag, Matrix> = ALL_RELATIONS
        .iter()
        .map(|t| (*t, Matrix::zeros(s, s)))
        .collect();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(CgmError::Parse {
                line: lineno + 1,
                message: format!("expected 4 tab-separated fields, found {}", fields.len()),
            });
        }
        let tag = RelationTag::parse(fields[0]).map_err(|e| CgmError::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let a = *index.get(fields[1]).ok_or_else(|| CgmError::Parse {
            line: lineno + 1,
            message: format!("unknown stock {:?}", fields[1]),
        })?;
        let b = *index.get(fields[2]).ok_or_else(|| CgmError::Parse {
            line: lineno + 1,
            message: format!("unknown stock {:?}", fields[2]),
        })?;
        let w: f64 = fields[3].parse().map_err(|_| CgmError::Parse {
            line: lineno + 1,
            message: format!("bad weight {:?}", fields[3]),
        })?;
        let m = relations.get_mut(&tag).unwrap();
        m.set(a, b, w);
        m.set(b, a, w);
    }
    Ok(RelationGraph { stock_count: s, relations, threshold, skipped_pairs: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pearson_self_and_affine() {
        let x = vec![1.0, 2.0, 5.0, 3.0, 8.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let y: Vec<f64> = x.iter().map(|v| -v + 7.0).collect();
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_hand_value() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y = vec![1.0, 3.0, 2.0, 4.0];
        assert!((pearson(&x, &y).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn pearson_errors() {
        let x = vec![1.0, 2.0];
        assert!(matches!(
            pearson(&x, &x),
            Err(CgmError::InsufficientHistory(_))
        ));
        let c = vec![3.0, 3.0, 3.0];
        let y = vec![1.0, 2.0, 3.0];
        assert!(matches!(
            pearson(&c, &y),
            Err(CgmError::UndefinedCorrelation(_))
        ));
    }

    #[test]
    fn pearson_symmetric_and_affine_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let n = rng.gen_range(3..40);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = rng.gen_range(0.1..5.0);
            let b = rng.gen_range(-3.0..3.0);
            let c1 = pearson(&x, &y).unwrap();
            let c2 = pearson(&y, &x).unwrap();
            assert!((c1 - c2).abs() < 1e-12);
            let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let c3 = pearson(&xt, &y).unwrap();
            assert!((c1 - c3).abs() < 1e-12);
        }
    }

    #[test]
    fn spearman_is_rank_based() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y = vec![1.0, 10.0, 100.0, 1000.0]; // monotone, nonlinear
        assert!((spearman(&x, &y).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn build_graph_trivials() {
        // Two series moving together (plus a third independent) at 0.6.
        let p0 = vec![0.01, -0.02, 0.03, -0.01, 0.02, 0.0, 0.01];
        let p1 = p0.clone();
        let p2 = vec![0.03, 0.01, -0.04, 0.02, -0.02, 0.01, -0.03];
        let flatv = vec![0.1, -0.1, 0.2, -0.2, 0.1, -0.1, 0.2];
        let graph = build_graph(
            &[p0, p1, p2],
            &[flatv.clone(), flatv.iter().map(|v| -v).collect(), flatv.clone()],
            0.6,
            CorrelationMethod::Pearson,
        )
        .unwrap();
        let m = &graph.relations[&RelationTag::PricePos];
        assert!((m.get(0, 1) - 1.0).abs() < 1e-12);
        assert_eq!(graph.relations[&RelationTag::PriceNeg].get(0, 1), 0.0);
        // Volume: stock 1 anti-correlates with 0 and 2.
        assert!(graph.relations[&RelationTag::VolNeg].get(0, 1) <= -0.6);
        assert!(graph.relations[&RelationTag::VolPos].get(0, 2) >= 0.6);
        // Diagonal excluded everywhere.
        for tag in ALL_RELATIONS {
            for i in 0..3 {
                assert_eq!(graph.relations[&tag].get(i, i), 0.0);
            }
        }
    }

    #[test]
    fn threshold_is_inclusive_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 60;
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = x.iter().zip(&z).map(|(a, b)| a + 0.8 * b).collect();
        let c = pearson(&x, &y).unwrap();
        assert!(c > 0.3 && c < 0.99);
        let flat: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();

        // Threshold just above the measured correlation: no edge.
        let g_above = build_graph(
            &[x.clone(), y.clone()],
            &[flat.clone(), flat.clone()],
            (c + 1e-9).min(0.999999),
            CorrelationMethod::Pearson,
        )
        .unwrap();
        assert_eq!(g_above.edge_count(RelationTag::PricePos), 0);

        // Threshold exactly at the measured correlation: edge present.
        let g_at = build_graph(
            &[x, y],
            &[flat.clone(), flat],
            c,
            CorrelationMethod::Pearson,
        )
        .unwrap();
        assert_eq!(g_at.edge_count(RelationTag::PricePos), 1);
    }

    #[test]
    fn raising_threshold_never_adds_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let s = 6;
        let n = 30;
        let series: Vec<Vec<f64>> = (0..s)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let vols: Vec<Vec<f64>> = (0..s)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut prev = usize::MAX;
        for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let g = build_graph(&series, &vols, t, CorrelationMethod::Pearson).unwrap();
            let total: usize = ALL_RELATIONS.iter().map(|r| g.edge_count(*r)).sum();
            assert!(total <= prev);
            prev = total;
        }
    }

    #[test]
    fn build_graph_permutation_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let s = 5;
        let n = 25;
        let price: Vec<Vec<f64>> = (0..s)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let vol: Vec<Vec<f64>> = (0..s)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let g = build_graph(&price, &vol, 0.2, CorrelationMethod::Pearson).unwrap();

        let perm = [3usize, 0, 4, 1, 2];
        let price_p: Vec<Vec<f64>> = perm.iter().map(|&i| price[i].clone()).collect();
        let vol_p: Vec<Vec<f64>> = perm.iter().map(|&i| vol[i].clone()).collect();
        let gp = build_graph(&price_p, &vol_p, 0.2, CorrelationMethod::Pearson).unwrap();
        for tag in ALL_RELATIONS {
            let a = &g.relations[&tag];
            let b = &gp.relations[&tag];
            for i in 0..s {
                for j in 0..s {
                    assert!((b.get(i, j) - a.get(perm[i], perm[j])).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn normalize_two_node_edge_and_empty_relation() {
        let mut relations: BTreeMap<RelationTag, Matrix> = ALL_RELATIONS
            .iter()
            .map(|t| (*t, Matrix::zeros(2, 2)))
            .collect();
        let m = relations.get_mut(&RelationTag::PricePos).unwrap();
        m.set(0, 1, 0.7);
        m.set(1, 0, 0.7);
        let graph = RelationGraph { stock_count: 2, relations, threshold: 0.6, skipped_pairs: 0 };
        let norm = normalize(&graph);
        let a = &norm.relations[&RelationTag::PricePos];
        assert!((a.get(0, 1) - 1.0).abs() < 1e-12);
        assert!((a.get(1, 0) - 1.0).abs() < 1e-12);
        assert_eq!(norm.relations[&RelationTag::VolPos].max_abs(), 0.0);
    }

    #[test]
    fn normalize_path_graph_hand_values() {
        // Path 0-1-2-3 with unit weights: degrees 1,2,2,1.
        let mut relations: BTreeMap<RelationTag, Matrix> = ALL_RELATIONS
            .iter()
            .map(|t| (*t, Matrix::zeros(4, 4)))
            .collect();
        let m = relations.get_mut(&RelationTag::VolPos).unwrap();
        for (i, j) in [(0, 1), (1, 2), (2, 3)] {
            m.set(i, j, 1.0);
            m.set(j, i, 1.0);
        }
        let graph = RelationGraph { stock_count: 4, relations, threshold: 0.6, skipped_pairs: 0 };
        let norm = normalize(&graph);
        let a = &norm.relations[&RelationTag::VolPos];
        let r2 = 1.0 / 2.0_f64.sqrt();
        assert!((a.get(0, 1) - r2).abs() < 1e-12);
        assert!((a.get(1, 2) - 0.5).abs() < 1e-12);
        assert!((a.get(2, 3) - r2).abs() < 1e-12);
        assert_eq!(a.get(0, 3), 0.0);
    }

    #[test]
    fn normalized_spectral_radius_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let s = 7;
        let mut relations: BTreeMap<RelationTag, Matrix> = ALL_RELATIONS
            .iter()
            .map(|t| (*t, Matrix::zeros(s, s)))
            .collect();
        let m = relations.get_mut(&RelationTag::PriceNeg).unwrap();
        for i in 0..s {
            for j in (i + 1)..s {
                if rng.gen::<f64>() < 0.4 {
                    let w = -rng.gen_range(0.6..1.0);
                    m.set(i, j, w);
                    m.set(j, i, w);
                }
            }
        }
        let graph = RelationGraph { stock_count: s, relations, threshold: 0.6, skipped_pairs: 0 };
        let norm = normalize(&graph);
        for (_, a) in &norm.relations {
            let (values, _) = sym_eig(a).unwrap();
            if let Some(max) = values.first() {
                assert!(*max <= 1.0 + 1e-9, "spectral radius {max}");
            }
            // Symmetry of the operator itself.
            assert!(a.sub(&a.transpose()).unwrap().max_abs() < 1e-15);
        }
    }

    #[test]
    fn graph_tsv_round_trip_bit_exact() {
        use tempfile::tempdir;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = 5;
        let names: Vec<String> = (0..s).map(|i| format!("S{i:03}")).collect();
        let mut relations: BTreeMap<RelationTag, Matrix> = ALL_RELATIONS
            .iter()
            .map(|t| (*t, Matrix::zeros(s, s)))
            .collect();
        for tag in [RelationTag::PricePos, RelationTag::VolNeg] {
            let m = relations.get_mut(&tag).unwrap();
            for i in 0..s {
                for j in (i + 1)..s {
                    if rng.gen::<f64>() < 0.5 {
                        let sign = if tag == RelationTag::VolNeg { -1.0 } else { 1.0 };
                        let w = sign * rng.gen_range(0.6..1.0);
                        m.set(i, j, w);
                        m.set(j, i, w);
                    }
                }
            }
        }
        let graph = RelationGraph { stock_count: s, relations, threshold: 0.6, skipped_pairs: 0 };

        let dir = tempdir().unwrap();
        let p1 = dir.path().join("g.tsv");
        let p2 = dir.path().join("g2.tsv");
        write_graph(&p1, &graph, &names).unwrap();
        let loaded = load_graph(&p1, &names, 0.6).unwrap();
        write_graph(&p2, &loaded, &names).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
        for tag in ALL_RELATIONS {
            assert_eq!(
                graph.relations[&tag].data(),
                loaded.relations[&tag].data()
            );
        }
    }

    #[test]
    fn planted_structure_recovered() {
        use crate::market_data::{synth_generate, SynthConfig};
        let cfg = SynthConfig {
            stocks: 10,
            days: 80,
            window: 20,
            factors: 2,
            noise: 0.05,
            news_prob: 0.05,
            ..SynthConfig::default()
        };
        let out = synth_generate(&cfg).unwrap();
        let last = *out.market.trading_days().last().unwrap();
        let (price, volume) = series_from_market(&out.market, last).unwrap();
        let graph = build_graph(&price, &volume, 0.6, CorrelationMethod::Pearson).unwrap();

        let mut got: Vec<(usize, usize, usize)> = Vec::new();
        for tag in ALL_RELATIONS {
            for (a, b, _) in graph.edges(tag) {
                got.push((tag as usize, a, b));
            }
        }
        got.sort_unstable();
        let mut want: Vec<(usize, usize, usize)> = out
            .truth
            .iter()
            .map(|e| (e.relation as usize, e.a, e.b))
            .collect();
        want.sort_unstable();
        assert_eq!(got, want);
    }
}
