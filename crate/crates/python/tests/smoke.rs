use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

#[test]
fn python_smoke_script_runs_against_embedded_module() {
    let script = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../python/smoke_test.py")).unwrap();
    Python::attach(|py| -> PyResult<()> {
        let module = PyModule::new(py, "ssr_sim")?;
        ssr_sim::register(&module)?;
        py.import("sys")?.getattr("modules")?.set_item("ssr_sim", &module)?;
        let code = CString::new(script).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("__name__", "smoke_test")?;
        py.run(&code, Some(&globals), None)?;
        globals.get_item("main")?.expect("script defines main").call0()?;
        Ok(())
    })
    .unwrap();
}
