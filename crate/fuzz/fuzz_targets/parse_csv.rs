#![no_main]

use libfuzzer_sys::fuzz_target;

use lattice_casimir_cli::table::read_table;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = read_table(text) {
        // whatever parses must survive a write and re-read
        let written = table.to_csv_string();
        let _ = read_table(&written);
    }
});
