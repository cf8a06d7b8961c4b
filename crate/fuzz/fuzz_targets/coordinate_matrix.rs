#![no_main]

use horw::sparse::SparseMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = SparseMatrix::parse_coordinate(data) {
        let mut buf = Vec::new();
        m.write_coordinate(&mut buf).unwrap();
        let back = SparseMatrix::parse_coordinate(&buf).unwrap();
        assert_eq!(back.rows(), m.rows());
        assert_eq!(back.cols(), m.cols());
        assert_eq!(back.nnz(), m.nnz());
    }
});
