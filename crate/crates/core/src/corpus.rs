//! Deterministic synthetic corpora for demos, CLI samples, and the
//! end-to-end holdout benchmark.
//!
//! The generated datasets mix two authorship styles: small "triad" teams
//! where two researchers each co-author with a shared collaborator but not
//! with one another until after the cutoff year, and a larger pool of
//! casual cross-collaborations that supplies the low-similarity mass the
//! percentile threshold cuts through. Membership, years, and venues are
//! all drawn from fixed-seed generators, so repeated calls are identical.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ingest::{AuthorRef, DatasetManifest, PublicationRecord};

struct CorpusShape {
    seed: u64,
    n_triads: usize,
    pool_size: usize,
    reserved: usize,
    casual_papers: usize,
    casual_authors: usize,
    solos_per_pool_member: usize,
    realized_triads: usize,
    repeat_papers: usize,
    first_year: i32,
    cutoff_year: i32,
    last_year: i32,
}

fn triad_member(t: usize, slot: char) -> AuthorRef {
    AuthorRef {
        id: format!("r-t{t}{slot}"),
        name: format!("Researcher T{t}{}", slot.to_ascii_uppercase()),
    }
}

fn pool_member(q: usize) -> AuthorRef {
    AuthorRef {
        id: format!("r-q{q:02}"),
        name: format!("Researcher Q{q:02}"),
    }
}

fn venue(series: &str, year: i32) -> (String, String) {
    let name = match series {
        "ka" => format!("Knowledge Analytics Conference {year}"),
        "dm" => format!("Data Management Symposium {year}"),
        _ => format!("Web Systems Workshop {year}"),
    };
    (format!("v-{series}{year}"), name)
}

fn make_record(
    paper_id: String,
    authors: Vec<AuthorRef>,
    series: &str,
    year: i32,
) -> PublicationRecord {
    let (venue_id, venue_name) = venue(series, year);
    PublicationRecord {
        title: format!("Study {paper_id}"),
        paper_id,
        authors,
        venue_id,
        venue_name,
        year,
    }
}

fn generate(shape: &CorpusShape) -> (Vec<PublicationRecord>, DatasetManifest) {
    let mut rng = ChaCha8Rng::seed_from_u64(shape.seed);
    let mut records = Vec::new();
    let span = (shape.cutoff_year - shape.first_year) as usize;

    // Triad teams publish at the focus series: a with b, then b with c.
    // The a-c leg stays unwritten until after the cutoff.
    for t in 0..shape.n_triads {
        let year_ab = shape.first_year + (t % span) as i32;
        let year_bc = shape.first_year + ((t + 2) % span) as i32;
        records.push(make_record(
            format!("p-t{t}-ab"),
            vec![triad_member(t, 'a'), triad_member(t, 'b')],
            "ka",
            year_ab,
        ));
        records.push(make_record(
            format!("p-t{t}-bc"),
            vec![triad_member(t, 'b'), triad_member(t, 'c')],
            "ka",
            year_bc,
        ));
    }

    // Casual focus-venue collaborations inside the pool. Any pair may
    // co-occur at most twice, which keeps every casual similarity well
    // below the triad leg scores.
    let contributors = shape.pool_size - shape.reserved;
    let mut co_occurrence = std::collections::BTreeMap::<(usize, usize), usize>::new();
    for i in 0..shape.casual_papers {
        let mut authors: Vec<usize> = Vec::new();
        'attempt: for _ in 0..200 {
            let mut draw: Vec<usize> = Vec::new();
            while draw.len() < shape.casual_authors {
                let candidate = rng.random_range(0..contributors);
                if !draw.contains(&candidate) {
                    draw.push(candidate);
                }
            }
            draw.sort_unstable();
            for x in 0..draw.len() {
                for y in (x + 1)..draw.len() {
                    if co_occurrence.get(&(draw[x], draw[y])).copied().unwrap_or(0) >= 2 {
                        continue 'attempt;
                    }
                }
            }
            authors = draw;
            break;
        }
        assert!(!authors.is_empty(), "casual paper sampling exhausted retries");
        for x in 0..authors.len() {
            for y in (x + 1)..authors.len() {
                *co_occurrence.entry((authors[x], authors[y])).or_insert(0) += 1;
            }
        }
        let year = shape.first_year + rng.random_range(0..=span) as i32;
        records.push(make_record(
            format!("p-c{i:03}"),
            authors.into_iter().map(pool_member).collect(),
            "ka",
            year,
        ));
    }

    // Solo papers at the non-focus series pad everyone's total paper count
    // (diluting casual similarities) and give the reserved researchers a
    // presence in the train graph.
    let mut solo = 0usize;
    for round in 0..shape.solos_per_pool_member {
        for q in 0..shape.pool_size {
            let series = if (q + round) % 2 == 0 { "dm" } else { "sw" };
            let year = shape.first_year + ((q + 3 * round) % (span + 1)) as i32;
            records.push(make_record(
                format!("p-s{solo:03}"),
                vec![pool_member(q)],
                series,
                year,
            ));
            solo += 1;
        }
    }

    // Post-cutoff records: most triads realize the missing a-c leg, a few
    // repeat an existing collaboration (which must not count as a future
    // edge), and the reserved pool members pair up for the first time.
    for t in 0..shape.realized_triads {
        records.push(make_record(
            format!("p-f-t{t}"),
            vec![triad_member(t, 'a'), triad_member(t, 'c')],
            "ka",
            shape.cutoff_year + 1,
        ));
    }
    for r in 0..shape.repeat_papers {
        let t = r % shape.n_triads;
        records.push(make_record(
            format!("p-f-repeat{r}"),
            vec![triad_member(t, 'a'), triad_member(t, 'b')],
            "ka",
            shape.last_year,
        ));
    }
    let mut reserved_pairs = 0usize;
    let mut q = contributors;
    while q + 1 < shape.pool_size {
        records.push(make_record(
            format!("p-f-pool{reserved_pairs}"),
            vec![pool_member(q), pool_member(q + 1)],
            "dm",
            shape.last_year,
        ));
        reserved_pairs += 1;
        q += 2;
    }

    let focus_venue_series = (shape.first_year..=shape.last_year)
        .map(|year| format!("v-ka{year}"))
        .collect();
    let manifest = DatasetManifest {
        record_count: records.len() as u64,
        focus_venue_series,
        source_description: format!(
            "synthetic co-authorship corpus: {} triad teams, {} pool researchers, seed {}",
            shape.n_triads, shape.pool_size, shape.seed
        ),
    };
    (records, manifest)
}

/// The ~200-record benchmark corpus: 8 triad teams, a 40-researcher pool,
/// 3 venue series spanning 2010-2018, cutoff year 2016.
pub fn holdout_corpus() -> (Vec<PublicationRecord>, DatasetManifest) {
    generate(&CorpusShape {
        seed: 0x5c01a,
        n_triads: 8,
        pool_size: 40,
        reserved: 4,
        casual_papers: 110,
        casual_authors: 4,
        solos_per_pool_member: 2,
        realized_triads: 6,
        repeat_papers: 2,
        first_year: 2010,
        cutoff_year: 2016,
        last_year: 2018,
    })
}

/// The 50-record sample corpus used by the CLI walkthrough.
pub fn sample_corpus() -> (Vec<PublicationRecord>, DatasetManifest) {
    generate(&CorpusShape {
        seed: 0x5a3d1e,
        n_triads: 3,
        pool_size: 16,
        reserved: 2,
        casual_papers: 24,
        casual_authors: 3,
        solos_per_pool_member: 1,
        realized_triads: 2,
        repeat_papers: 1,
        first_year: 2011,
        cutoff_year: 2016,
        last_year: 2017,
    })
}
