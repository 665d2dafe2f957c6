use proptest::prelude::*;
use swarmcast::labels::{continue_labels, LabelStyle, YearMonth};
use swarmcast::ohlc_csv::{parse_dataset, write_dataset};

fn cents() -> impl Strategy<Value = f64> {
    (1u64..10_000_000).prop_map(|c| c as f64 / 100.0)
}

fn record() -> impl Strategy<Value = [f64; 4]> {
    (cents(), cents(), cents(), cents()).prop_map(|(a, b, c, d)| {
        let low = a.min(b);
        let high = a.max(b);
        [c, high, low, d]
    })
}

proptest! {
    // values with at most two decimals survive emit and re-parse unchanged
    #[test]
    fn two_decimal_reemission(rows in prop::collection::vec(record(), 1..30)) {
        let mut text = String::from("Month,Open,High,Low,Close\n");
        for (i, [o, h, l, c]) in rows.iter().enumerate() {
            text.push_str(&format!("m{i},{o},{h},{l},{c}\n"));
        }
        let first = parse_dataset(&text).unwrap();
        let emitted = write_dataset(&first);
        let second = parse_dataset(&emitted).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(write_dataset(&second), emitted);
    }

    // two-digit years are read as 20yy, so stay clear of the century
    #[test]
    fn labels_continue_one_month_at_a_time(year in 2000i32..2090, month in 1u32..=12, n in 1usize..40) {
        let start = YearMonth { year, month };
        let labels = continue_labels(&start.to_string(), n, LabelStyle::Iso).unwrap();
        let mut prev = start;
        for label in &labels {
            let next = YearMonth::parse(label).unwrap();
            prop_assert!(next > prev);
            prop_assert_eq!(next, prev.next());
            prev = next;
        }
        let short = continue_labels(&start.format(LabelStyle::Short), n, LabelStyle::Short).unwrap();
        let reparsed: Vec<String> = short.iter().map(|l| YearMonth::parse(l).unwrap().to_string()).collect();
        prop_assert_eq!(reparsed, labels);
    }
}
