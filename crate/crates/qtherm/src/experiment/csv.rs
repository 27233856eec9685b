//! Deterministic CSV output.
//!
//! Floats are printed with 17 significant digits (`{:.16e}`), which is
//! enough to reconstruct the exact f64 bit pattern; undefined cells carry
//! the literal token `NA`. Lines end in LF and the file ends in a newline,
//! so identical runs produce byte-identical files.

use std::io::{self, Write};

use super::{Column, OutputRow};

/// Serialize `rows` with the given column selection.
///
/// An empty table produces a header-only file.
pub fn emit_csv<W: Write>(rows: &[OutputRow], columns: &[Column], writer: &mut W) -> io::Result<()> {
    let header: Vec<&str> = columns.iter().map(Column::name).collect();
    writeln!(writer, "{}", header.join(","))?;
    let mut line = String::new();
    for row in rows {
        line.clear();
        for (i, column) in columns.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&cell(row, *column));
        }
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

fn cell(row: &OutputRow, column: Column) -> String {
    match column {
        Column::T => float(row.t),
        Column::Rx => float(row.rx),
        Column::Ry => float(row.ry),
        Column::Rz => float(row.rz),
        Column::EP => float(row.e_p),
        Column::S => float(row.s),
        Column::SR => opt(row.s_r),
        Column::DRel => opt(row.d_rel),
        Column::BetaR => opt(row.beta_r),
        Column::TR => opt(row.t_r),
        Column::BetaE => opt(row.beta_e),
        Column::E1 => opt(row.e1),
        Column::E2 => float(row.e2),
        Column::TCorr => opt(row.t_corr),
        Column::BetaCorr => opt(row.beta_corr),
        Column::QfiClosed => opt(row.qfi_closed),
        Column::QfiBloch => opt(row.qfi_bloch),
        Column::Regime => row.regime.to_string(),
    }
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    match x {
        Some(x) => float(x),
        None => "NA".to_string(),
    }
}
