use pyo3::prelude::*;

#[pymodule]
fn teca(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
