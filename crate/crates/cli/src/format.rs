//! Fixed-precision numbers and CSV assembly for result files.

/// Nine significant digits in scientific notation, e.g. `7.76315789e7`.
pub fn num(x: f64) -> String {
    // keep -0 out of the goldens
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

/// CSV document with a fixed header.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    width: usize,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer
            .write_record(header.iter().map(|h| h.as_ref()))
            .expect("writing to memory");
        Self {
            writer,
            width: header.len(),
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        assert_eq!(fields.len(), self.width, "row width differs from header");
        self.writer
            .write_record(fields.iter().map(|f| f.as_ref()))
            .expect("writing to memory");
    }

    pub fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("writing to memory");
        String::from_utf8(bytes).expect("fields are UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(77_631_578.947_368_42), "7.76315789e7");
        assert_eq!(num(0.0), "0.00000000e0");
        assert_eq!(num(-0.0), "0.00000000e0");
        assert_eq!(num(1.0), "1.00000000e0");
        assert_eq!(num(-2.5e-3), "-2.50000000e-3");
        // exact tie at the tenth digit rounds to even
        assert_eq!(num(1_000_000_005.0), "1.00000000e9");
        assert_eq!(num(1_000_000_015.0), "1.00000002e9");
    }

    #[test]
    fn table_uses_lf() {
        let mut t = Table::new(&["a", "b"]);
        t.row(&["1", "2"]);
        assert_eq!(t.finish(), "a,b\n1,2\n");
    }
}
