use std::io::{Read, Write};

use selfaffine_core::PointCloud;

use super::{FormatError, FormatResult};

/// One point per line, coordinates with 17 significant digits, no header.
pub fn write_csv<W: Write>(cloud: &PointCloud, out: W) -> FormatResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for p in cloud.points() {
        w.write_record(p.iter().map(|x| format!("{x:.16e}")))?;
    }
    w.flush().map_err(|e| FormatError::Csv(e.into()))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> FormatResult<PointCloud> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut cloud: Option<PointCloud> = None;
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let point = record
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| FormatError::Invalid(format!("line {}: not a finite number: {s:?}", line + 1)))
            })
            .collect::<FormatResult<Vec<f64>>>()?;
        if point.is_empty() {
            return Err(FormatError::Invalid(format!("line {}: empty record", line + 1)));
        }
        let c = cloud.get_or_insert_with(|| PointCloud::new(point.len()));
        c.push(&point)
            .map_err(|e| FormatError::Invalid(format!("line {}: {e}", line + 1)))?;
    }
    cloud.ok_or_else(|| FormatError::Invalid("no points".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let pts = vec![vec![0.1, -2.0 / 3.0], vec![1e-300, 12345.678]];
        let cloud = PointCloud::from_points(2, &pts).unwrap();
        let mut buf = Vec::new();
        write_csv(&cloud, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), "1.0000000000000001e-1,-6.6666666666666663e-1");
        assert_eq!(read_csv(&buf[..]).unwrap(), cloud);
    }

    #[test]
    fn rejections() {
        assert!(read_csv("1,2\n3\n".as_bytes()).is_err());
        assert!(read_csv("1,x\n".as_bytes()).is_err());
        assert!(read_csv("".as_bytes()).is_err());
        assert!(read_csv("nan,1\n".as_bytes()).is_err());
    }
}
