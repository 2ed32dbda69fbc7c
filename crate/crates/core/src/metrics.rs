//! Distortion measurement: how much did embedding actually move the cover?
//!
//! MSE is averaged over the carrier region only — header bytes are identical
//! by construction and would just dilute the number. PSNR uses the natural
//! full scale of the medium: 255 for 8-bit units (BMP channels, 8-bit WAV)
//! and 65535 for 16-bit WAV samples, where a low-byte change of d moves the
//! sample value by exactly d.
//!
//! Expected values for full-capacity random payloads: k=1 flips each carrier
//! LSB with probability 1/2, so MSE ≈ 0.5 and PSNR ≈ 51.1 dB; k=2 replaces
//! the low two bits uniformly, E[(a−b)²] = 40/16 = 2.5, PSNR ≈ 44.2 dB.

use crate::covers::CoverObject;
use crate::error::{Error, Result};

/// Everything `diff` reports about a cover/stego pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    /// Mean squared error over carrier positions.
    pub mse: f64,
    /// 10·log10(MAX²/MSE); +∞ exactly when nothing changed.
    pub psnr_db: f64,
    /// Count of differing bytes anywhere in the file.
    pub bytes_changed: u64,
    /// Largest per-byte |a − b| among the differences.
    pub max_abs_delta: u32,
    /// Differing bytes outside the carrier set — must be 0 for a valid embed.
    pub changed_outside_carriers: u64,
}

impl DistortionReport {
    /// Machine-readable key=value block, one field per line.
    pub fn to_key_value(&self) -> String {
        let psnr = if self.psnr_db.is_infinite() {
            "inf".to_string()
        } else {
            format!("{:.2}", self.psnr_db)
        };
        format!(
            "mse={:.6}\npsnr_db={}\nbytes_changed={}\nmax_abs_delta={}\nchanged_outside_carriers={}",
            self.mse, psnr, self.bytes_changed, self.max_abs_delta, self.changed_outside_carriers
        )
    }
}

fn check_comparable(cover: &CoverObject, stego: &CoverObject) -> Result<()> {
    if cover.kind != stego.kind
        || cover.raw.len() != stego.raw.len()
        || cover.carrier_positions != stego.carrier_positions
    {
        return Err(Error::Config(
            "cover and stego objects have different shapes; nothing to compare".into(),
        ));
    }
    Ok(())
}

/// Measure the damage. Works on any same-shaped pair; flags rather than
/// fails when bytes changed outside the carrier set, so callers can report
/// on hostile inputs too.
pub fn distortion(cover: &CoverObject, stego: &CoverObject) -> Result<DistortionReport> {
    check_comparable(cover, stego)?;

    let mut bytes_changed = 0u64;
    let mut max_abs_delta = 0u32;
    let mut outside = 0u64;
    let mut sq_sum = 0u64;

    let mut carriers = cover.carrier_positions.iter().copied().peekable();
    for (i, (&a, &b)) in cover.raw.iter().zip(stego.raw.iter()).enumerate() {
        let is_carrier = carriers.peek() == Some(&i);
        if is_carrier {
            carriers.next();
            let d = (a as i64 - b as i64).unsigned_abs();
            sq_sum += d * d;
        }
        if a != b {
            bytes_changed += 1;
            max_abs_delta = max_abs_delta.max((a as i32 - b as i32).unsigned_abs());
            if !is_carrier {
                outside += 1;
            }
        }
    }

    let carrier_count = cover.carrier_count() as f64;
    let mse = if carrier_count == 0.0 { 0.0 } else { sq_sum as f64 / carrier_count };
    let max = cover.kind.sample_max() as f64;
    let psnr_db = if mse == 0.0 { f64::INFINITY } else { 10.0 * (max * max / mse).log10() };

    Ok(DistortionReport {
        mse,
        psnr_db,
        bytes_changed,
        max_abs_delta,
        changed_outside_carriers: outside,
    })
}

/// Audit the diff bit by bit: every change must sit inside a carrier byte's
/// k lowest bits. Returns the differing positions, or an audit error naming
/// the first violation.
pub fn lsb_diff_report(
    cover: &CoverObject,
    stego: &CoverObject,
    k: u8,
) -> Result<Vec<(usize, u8, u8)>> {
    check_comparable(cover, stego)?;
    let low_mask = (1u8 << k) - 1;

    let mut diffs = Vec::new();
    let mut carriers = cover.carrier_positions.iter().copied().peekable();
    for (i, (&a, &b)) in cover.raw.iter().zip(stego.raw.iter()).enumerate() {
        let is_carrier = carriers.peek() == Some(&i);
        if is_carrier {
            carriers.next();
        }
        if a == b {
            continue;
        }
        if !is_carrier {
            return Err(Error::Audit(format!(
                "byte {i} changed outside the carrier region ({a:#04x} -> {b:#04x})"
            )));
        }
        if (a ^ b) & !low_mask != 0 {
            return Err(Error::Audit(format!(
                "carrier byte {i} changed above bit {k} ({a:#04x} -> {b:#04x})"
            )));
        }
        diffs.push((i, a, b));
    }
    Ok(diffs)
}
