//! Bit accounting for serving a playlist of corpus items either verbatim or
//! as stream codes after a one-time schematic transfer.

use serde::{Deserialize, Serialize};

use crate::construct::construct;
use crate::corpus::Corpus;
use crate::encode::encode;
use crate::error::SimulationError;
use crate::format::{framed_len, packed_bit_len, write_schematic};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Home bandwidth over mobile bandwidth.
    pub bandwidth_ratio: f64,
    /// Corpus indices, one per request.
    pub playlist: Vec<usize>,
    /// Fixed per-message overhead in bits. `None` prices each message at its
    /// actual framed size on the wire.
    #[serde(default)]
    pub framing_overhead_bits: Option<usize>,
}

impl SimulationConfig {
    /// Every item once, in corpus order, `rounds` times.
    pub fn cycling(n: usize, rounds: usize, bandwidth_ratio: f64) -> Self {
        SimulationConfig {
            bandwidth_ratio,
            playlist: (0..rounds).flat_map(|_| 0..n).collect(),
            framing_overhead_bits: None,
        }
    }

    fn message_bits(&self, payload: usize) -> usize {
        match self.framing_overhead_bits {
            Some(extra) => payload + extra,
            None => framed_len(payload),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub n: usize,
    pub z: usize,
    pub bandwidth_ratio: f64,
    pub schematic_states: usize,
    /// Packed binary schematic size, charged before the first request.
    pub setup_bits: usize,
    /// Size of the canonical text form, for reference.
    pub setup_text_bits: usize,
    pub naive_payload_bits: Vec<usize>,
    pub ccss_payload_bits: Vec<usize>,
    pub naive_bits_per_request: Vec<usize>,
    pub ccss_bits_per_request: Vec<usize>,
    pub cumulative_naive: Vec<u64>,
    /// Includes `setup_bits`.
    pub cumulative_ccss: Vec<u64>,
    pub break_even_request_index: Option<usize>,
    pub savings_percent_per_request: Vec<f64>,
    pub max_naive_payload_bits: usize,
    pub max_ccss_payload_bits: usize,
    /// `(max naive − max ccss) / max naive` over payload bits.
    pub max_payload_reduction: Option<f64>,
    /// Per-request payload target `z / r`.
    pub payload_target_bits: f64,
    pub within_payload_target: bool,
}

pub fn simulate(corpus: &Corpus, cfg: &SimulationConfig) -> Result<SimulationReport, SimulationError> {
    if cfg.bandwidth_ratio.is_nan() || cfg.bandwidth_ratio <= 1.0 {
        return Err(SimulationError::BandwidthRatio(cfg.bandwidth_ratio));
    }
    let n = corpus.n();
    if let Some((position, &index)) = cfg.playlist.iter().enumerate().find(|(_, &i)| i >= n) {
        return Err(SimulationError::PlaylistIndex { position, index, n });
    }
    let (d, _) = construct(corpus);
    let code_len: Vec<usize> =
        corpus.iter().map(|item| encode(&d, d.aux(), item).map(|c| c.len())).collect::<Result<_, _>>()?;
    let naive_payload_bits: Vec<usize> = cfg.playlist.iter().map(|&i| corpus.items()[i].len()).collect();
    let ccss_payload_bits: Vec<usize> = cfg.playlist.iter().map(|&i| code_len[i]).collect();
    let naive_bits_per_request: Vec<usize> = naive_payload_bits.iter().map(|&b| cfg.message_bits(b)).collect();
    let ccss_bits_per_request: Vec<usize> = ccss_payload_bits.iter().map(|&b| cfg.message_bits(b)).collect();
    let setup_bits = packed_bit_len(&d);
    let running = |start: u64, per: &[usize]| -> Vec<u64> {
        per.iter()
            .scan(start, |acc, &b| {
                *acc += b as u64;
                Some(*acc)
            })
            .collect()
    };
    let cumulative_naive = running(0, &naive_bits_per_request);
    let cumulative_ccss = running(setup_bits as u64, &ccss_bits_per_request);
    let break_even_request_index = cumulative_ccss.iter().zip(&cumulative_naive).position(|(c, v)| c <= v);
    let savings_percent_per_request = naive_bits_per_request
        .iter()
        .zip(&ccss_bits_per_request)
        .map(|(&v, &c)| if v == 0 { 0.0 } else { 100.0 * (v as f64 - c as f64) / v as f64 })
        .collect();
    let max_naive_payload_bits = naive_payload_bits.iter().copied().max().unwrap_or(0);
    let max_ccss_payload_bits = ccss_payload_bits.iter().copied().max().unwrap_or(0);
    let max_payload_reduction = (max_naive_payload_bits > 0)
        .then(|| (max_naive_payload_bits as f64 - max_ccss_payload_bits as f64) / max_naive_payload_bits as f64);
    let payload_target_bits = corpus.z() as f64 / cfg.bandwidth_ratio;
    Ok(SimulationReport {
        n,
        z: corpus.z(),
        bandwidth_ratio: cfg.bandwidth_ratio,
        schematic_states: d.len(),
        setup_bits,
        setup_text_bits: 8 * write_schematic(&d).len(),
        naive_payload_bits,
        ccss_payload_bits,
        naive_bits_per_request,
        ccss_bits_per_request,
        cumulative_naive,
        cumulative_ccss,
        break_even_request_index,
        savings_percent_per_request,
        max_naive_payload_bits,
        max_ccss_payload_bits,
        max_payload_reduction,
        payload_target_bits,
        within_payload_target: max_ccss_payload_bits as f64 <= payload_target_bits,
    })
}
