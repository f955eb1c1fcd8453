//! Writes the bundled synthetic corpus: 5,000 English posts spread over the
//! default study window, drawn from ten word themes whose popularity shifts
//! week to week, with place names, flag emoji, hashtags, mentions and links
//! mixed in.
//!
//!     cargo run --example synth_corpus -- fixtures/synthetic_corpus.jsonl

use std::fmt::Write as _;

use chrono::{Duration, NaiveDate, TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DOCS: usize = 5000;
const DAYS: i64 = 93;

const THEMES: [[&str; 10]; 10] = [
    [
        "mask",
        "face",
        "wear",
        "glove",
        "cover",
        "sanitizer",
        "hand",
        "wash",
        "protect",
        "store",
    ],
    [
        "case",
        "death",
        "report",
        "total",
        "number",
        "confirmed",
        "toll",
        "daily",
        "record",
        "rise",
    ],
    [
        "reopen",
        "business",
        "restaurant",
        "economy",
        "open",
        "plan",
        "phase",
        "retail",
        "salon",
        "customer",
    ],
    [
        "school",
        "student",
        "teacher",
        "class",
        "online",
        "exam",
        "graduation",
        "campus",
        "learn",
        "semester",
    ],
    [
        "vaccine",
        "trial",
        "research",
        "drug",
        "scientist",
        "test",
        "lab",
        "treatment",
        "develop",
        "study",
    ],
    [
        "social",
        "distance",
        "stay",
        "home",
        "lockdown",
        "quarantine",
        "isolate",
        "order",
        "rule",
        "park",
    ],
    [
        "job",
        "unemployment",
        "worker",
        "loan",
        "relief",
        "bill",
        "stimulus",
        "benefit",
        "rent",
        "pay",
    ],
    [
        "hospital",
        "nurse",
        "doctor",
        "patient",
        "icu",
        "ventilator",
        "staff",
        "frontline",
        "care",
        "bed",
    ],
    [
        "testing", "trace", "contact", "app", "symptom", "fever", "kit", "swab", "site", "result",
    ],
    [
        "game", "season", "league", "fan", "concert", "movie", "stream", "player", "cancel", "event",
    ],
];

const FILLER: [&str; 8] = ["today", "people", "news", "time", "week", "world", "update", "family"];

const PLACES: [&str; 16] = [
    "in New York",
    "across Texas",
    "in California",
    "the US",
    "in London",
    "in Manchester",
    "across Scotland",
    "the UK",
    "in Toronto",
    "across Ontario",
    "in Vancouver",
    "Canada",
    "in Beijing",
    "in Wuhan",
    "in Shanghai",
    "China",
];

const FLAGS: [&str; 4] = [
    "\u{1F1FA}\u{1F1F8}",
    "\u{1F1EC}\u{1F1E7}",
    "\u{1F1E8}\u{1F1E6}",
    "\u{1F1E8}\u{1F1F3}",
];
const HASHTAGS: [&str; 5] = [
    "#StayHome",
    "#COVID19",
    "#Coronavirus",
    "#SocialDistancing",
    "#Pandemic",
];
const MENTIONS: [&str; 4] = ["@WHO", "@CDCgov", "@NHSuk", "@nytimes"];

/// Relative popularity of theme `t` in week `w` (1..=14).
fn theme_weight(t: usize, w: u32) -> f64 {
    let x = f64::from(w - 1) / 13.0;
    match t {
        1 => 1.0 + 2.0 * (-((x - 0.35) * (x - 0.35)) / 0.04).exp(),
        2 => 0.3 + 2.5 * x,
        3 => 1.5 - x,
        5 => 2.0 - 1.2 * x,
        6 => 0.8 + (x * 6.0).sin().abs(),
        9 => 0.5 + 0.5 * x,
        _ => 1.0,
    }
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items[rng.random_range(0..items.len())]
}

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixtures/synthetic_corpus.jsonl".into());
    let mut rng = ChaCha8Rng::seed_from_u64(2020);
    let start = NaiveDate::from_ymd_opt(2020, 3, 23)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    let mut lines = String::new();
    for i in 0..DOCS {
        let offset = Duration::seconds(rng.random_range(0..DAYS * 86_400));
        let created = Utc.from_utc_datetime(&(start + offset));
        let week = (offset.num_days() / 7 + 1) as u32;

        let weights: Vec<f64> = (0..THEMES.len()).map(|t| theme_weight(t, week)).collect();
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut theme = THEMES.len() - 1;
        for (t, w) in weights.iter().enumerate() {
            if u < *w {
                theme = t;
                break;
            }
            u -= w;
        }
        let other = rng.random_range(0..THEMES.len());

        let len = rng.random_range(8..=12);
        let mut words: Vec<String> = (0..len)
            .map(|_| {
                let r = rng.random::<f64>();
                let w = if r < 0.75 {
                    pick(&mut rng, &THEMES[theme])
                } else if r < 0.9 {
                    pick(&mut rng, &THEMES[other])
                } else {
                    pick(&mut rng, &FILLER)
                };
                w.to_string()
            })
            .collect();
        if rng.random::<f64>() < 0.4 {
            let at = rng.random_range(0..=words.len());
            words.insert(at, pick(&mut rng, &PLACES).to_string());
        }
        if rng.random::<f64>() < 0.3 {
            words.push(pick(&mut rng, &HASHTAGS).to_string());
        }
        if rng.random::<f64>() < 0.15 {
            words.insert(0, pick(&mut rng, &MENTIONS).to_string());
        }
        if rng.random::<f64>() < 0.08 {
            words.push(pick(&mut rng, &FLAGS).to_string());
        }
        if rng.random::<f64>() < 0.2 {
            words.push(format!("https://t.co/{:08x}", rng.random::<u32>()));
        }
        if let Some(first) = words.first_mut() {
            let mut c = first.chars();
            if let Some(h) = c.next() {
                *first = h.to_uppercase().chain(c).collect();
            }
        }
        let record = serde_json::json!({
            "id": format!("s{i:05}"),
            "created_at": created.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            "text": words.join(" "),
            "lang": "en",
            "is_retweet": false,
        });
        let _ = writeln!(lines, "{record}");
    }
    std::fs::write(&out, lines).expect("write corpus");
    eprintln!("wrote {DOCS} records to {out}");
}
