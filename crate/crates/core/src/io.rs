//! Binary container and CSV export for [`GridSignal`].
//!
//! Container layout, all little-endian:
//!
//! | field     | type            |
//! |-----------|-----------------|
//! | magic     | `b"BFGS"`       |
//! | version   | `u32` (= 1)     |
//! | domain    | `u8` (0 time, 1 frequency) |
//! | dimension | `u32`           |
//! | n         | `u64`           |
//! | spacing   | `f64` × dimension |
//! | values    | (`f64` re, `f64` im) × n^dimension, row-major |

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Domain, GridSignal, UniformGrid};

const MAGIC: &[u8; 4] = b"BFGS";
const VERSION: u32 = 1;

pub fn write_signal<W: Write>(signal: &GridSignal, mut out: W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&[match signal.domain {
        Domain::Time => 0u8,
        Domain::Frequency => 1u8,
    }])?;
    out.write_all(&(signal.grid.dim() as u32).to_le_bytes())?;
    out.write_all(&(signal.grid.n() as u64).to_le_bytes())?;
    for s in signal.grid.spacing() {
        out.write_all(&s.to_le_bytes())?;
    }
    for v in &signal.values {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn read_array<const N: usize, R: Read>(input: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    input.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("truncated input".into()),
        _ => Error::Io(e),
    })?;
    Ok(buf)
}

fn read_f64<R: Read>(input: &mut R) -> Result<f64> {
    Ok(f64::from_le_bytes(read_array::<8, R>(input)?))
}

pub fn read_signal<R: Read>(mut input: R) -> Result<GridSignal> {
    if &read_array::<4, R>(&mut input)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(read_array::<4, R>(&mut input)?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let domain = match read_array::<1, R>(&mut input)?[0] {
        0 => Domain::Time,
        1 => Domain::Frequency,
        t => return Err(Error::Format(format!("unknown domain tag {t}"))),
    };
    let dim = u32::from_le_bytes(read_array::<4, R>(&mut input)?) as usize;
    let n = u64::from_le_bytes(read_array::<8, R>(&mut input)?) as usize;
    if dim == 0 || dim > 8 {
        return Err(Error::Format(format!("unsupported dimension {dim}")));
    }
    let spacing = (0..dim).map(|_| read_f64(&mut input)).collect::<Result<Vec<_>>>()?;
    let grid = UniformGrid::with_spacings(n, spacing)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(&mut input)?;
        let im = read_f64(&mut input)?;
        values.push(Complex64::new(re, im));
    }
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes".into()));
    }
    GridSignal::new(grid, domain, values)
}

/// One row per grid point: coordinates (`x0`, `x1`, … or `w0`, `w1`, … for
/// spectra), then `re`, `im`, `abs`.
pub fn write_signal_csv<W: Write>(signal: &GridSignal, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let prefix = match signal.domain {
        Domain::Time => "x",
        Domain::Frequency => "w",
    };
    let mut header: Vec<String> = (0..signal.grid.dim()).map(|i| format!("{prefix}{i}")).collect();
    header.extend(["re", "im", "abs"].map(String::from));
    w.write_record(&header)?;
    let mut p = vec![0.0; signal.grid.dim()];
    for (i, v) in signal.values.iter().enumerate() {
        signal.grid.point_into(i, &mut p);
        let mut row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        row.extend([v.re, v.im, v.norm()].map(|c| c.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
