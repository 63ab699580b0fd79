use venue_core::dataset::{generate, GeneratorConfig};
use venue_core::{tie_strength, validate};

#[test]
fn default_contacts_respect_the_caps() {
    let cfg = GeneratorConfig::default();
    let (mut pairs, mut max_tie, mut max_freq, mut max_minutes) = (0usize, 0.0f64, 0u32, 0u32);
    let mut seed = 0;
    while pairs < 1000 {
        let conf = generate(&GeneratorConfig { seed, ..cfg.clone() }).unwrap();
        assert!(validate(&conf).is_empty(), "seed {seed}");
        for (pair, c) in conf.contacts.iter() {
            let tie = tie_strength(&conf.contacts, pair.first(), pair.second(), cfg.frame_t).unwrap();
            max_tie = max_tie.max(tie.0);
            max_freq = max_freq.max(c.frequency);
            max_minutes = max_minutes.max(c.duration);
            pairs += 1;
        }
        seed += 1;
    }
    assert!(max_tie <= 560.0 / 720.0 + 1e-12, "{max_tie}");
    assert!(max_freq <= 7 && max_minutes <= 80);
    // attainment of the caps is likely, not guaranteed
    if max_freq < 7 || max_minutes < 80 {
        eprintln!("caps not attained over {pairs} pairs: frequency {max_freq}, duration {max_minutes}");
    }
}
