#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;
mod support;

use std::fs;
use std::process::Command;

use venue_core::dataset::{generate, load, GeneratorConfig};
use venue_core::Channel;

#[test]
fn shipped_fixture_is_the_default_generator_output() {
    assert_eq!(
        load(support::fixture()).unwrap(),
        generate(&GeneratorConfig::default()).unwrap()
    );
}

#[test]
fn oracle_pipeline_reproduces_the_golden_files() {
    let conf = load(support::fixture()).unwrap();
    for channel in Channel::ALL {
        let csv = support::oracle_csv(&conf, channel, 0).unwrap();
        let path = support::golden(channel);
        if std::env::var_os("VENUE_WRITE_GOLDEN").is_some() && !path.exists() {
            fs::write(&path, &csv).unwrap();
        }
        assert_eq!(csv, fs::read_to_string(&path).unwrap(), "{channel}");
        let r = support::recalls(&csv);
        assert!(r.windows(2).all(|w| w[1] <= w[0]), "{channel}: {r:?}");
    }
}

#[test]
fn evaluate_command_writes_the_golden_csv() {
    let dir = tempfile::tempdir().unwrap();
    for channel in Channel::ALL {
        let out = dir.path().join(format!("{channel}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_venue"))
            .arg("evaluate")
            .arg(support::fixture())
            .args(["--channel", channel.as_str(), "--split-seed", "0", "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        assert_eq!(
            fs::read_to_string(&out).unwrap(),
            fs::read_to_string(support::golden(channel)).unwrap()
        );
    }
}
