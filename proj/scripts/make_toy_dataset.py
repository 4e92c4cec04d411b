#!/usr/bin/env python3
"""Regenerate the bundled toy dataset under data/toy/.

Layout: 12 topic clusters, each one query page plus 13 events, 30 filler
pages, 2 place pages (200 entities). Clusters 0-5 sit in the German country
box and are densely linked in links_de.tsv; clusters 6-11 mirror that in
France / links_fr.tsv. Cluster link shape: the query and event 0 form a hub
pair every other cluster member points at, so event 0 leads its cluster on
every link feature, sits at the query's exact coordinates, and shares its
exact time interval.

Clicks: German clusters use a sliding count schedule (home counts fall,
foreign counts rise with the event index) so the German-language share
decays monotonically across each cluster. French clusters use a fixed
home:foreign ratio, which keeps their shares flat in both languages. Page
pg00 -> event ev0000 gets an extra-large German count: that pair is the
planted recommendation the end-to-end checks look for.

Deterministic: no randomness, fixed schedules only. Run from anywhere:

    python3 scripts/make_toy_dataset.py
"""

import datetime
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"

N_CLUSTERS = 12
EVENTS_PER_CLUSTER = 13
N_FILLERS = 30

DE_THEMES = ["Jazz festival", "Film week", "Book fair", "Craft market",
             "Harvest feast", "Winter market"]
FR_THEMES = ["Cinema nights", "Wine fair", "Street art days", "Food week",
             "Music days", "Light show"]

DE_BOX = "47.2,5.8;55.5,5.8;55.5,15.5;47.2,15.5"
FR_BOX = "41.3,-5.2;51.5,-5.2;51.5,9.6;41.3,9.6"
PLACE_COORD = {"de": (50.9, 12.4), "fr": (46.0, 0.8)}


def cluster_home(c):
    return "de" if c < 6 else "fr"


def cluster_center(c):
    if c < 6:
        return 48.5 + 1.1 * c, 10.5 + 0.6 * c
    return 42.5 + 1.4 * (c - 6), -4.0 + 0.9 * (c - 6)


def cluster_theme(c):
    return DE_THEMES[c] if c < 6 else FR_THEMES[c - 6]


def qid(c):
    return f"pg{c:02d}"


def eid(c, i):
    return f"ev{c:02d}{i:02d}"


def day(c, offset):
    return (datetime.date(2021, c + 1, 1) + datetime.timedelta(days=offset)).isoformat()


def entity_rows():
    rows = []
    for c in range(N_CLUSTERS):
        lat, lon = cluster_center(c)
        theme = cluster_theme(c)
        rows.append([qid(c), f"{theme} guide", "0", day(c, 0), day(c, 26),
                     f"{lat},{lon}", ""])
        for i in range(EVENTS_PER_CLUSTER):
            start, end = day(c, i), day(c, 26 - i)
            if i == EVENTS_PER_CLUSTER - 1:
                # Last event of each cluster carries no coordinates of its
                # own and resolves through the regional place page instead.
                coords, place = "", f"place_{cluster_home(c)}"
            else:
                coords, place = f"{lat + 0.02 * i},{lon + 0.015 * i}", ""
            rows.append([eid(c, i), f"{theme} event {i}", "1", start, end, coords, place])
    for j in range(N_FILLERS):
        c = j % N_CLUSTERS
        lat, lon = cluster_center(c)
        rows.append([f"fl{j:02d}", f"Background page {j}", "0", "", "",
                     f"{lat - 0.05},{lon - 0.05}", ""])
    for lang, (lat, lon) in sorted(PLACE_COORD.items()):
        rows.append([f"place_{lang}", f"Region {lang}", "0", "", "", f"{lat},{lon}", ""])
    return rows


def link_rows(lang):
    rows = []
    for c in range(N_CLUSTERS):
        q = qid(c)
        hub = eid(c, 0)
        if cluster_home(c) == lang:
            # Dense home-language cluster: hub shape around the query and
            # event 0, plus a chain through the remaining events.
            for i in range(EVENTS_PER_CLUSTER):
                rows.append((q, eid(c, i)))
                rows.append((eid(c, i), q))
            for i in range(1, EVENTS_PER_CLUSTER):
                rows.append((eid(c, i), hub))
            for i in range(EVENTS_PER_CLUSTER - 1):
                rows.append((eid(c, i), eid(c, i + 1)))
            for i in range(1, 8):
                rows.append((hub, eid(c, i)))
            for j in range(N_FILLERS):
                if j % N_CLUSTERS == c:
                    rows.append((f"fl{j:02d}", q))
                    rows.append((f"fl{j:02d}", hub))
                    rows.append((f"fl{j:02d}", eid(c, 1 + j % 5)))
        else:
            # Thin away-language presence: query and events stay connected
            # so walks still embed them, without the hub structure.
            for i in range(EVENTS_PER_CLUSTER):
                rows.append((q, eid(c, i)))
                rows.append((eid(c, i), q))
        rows.append((q, qid((c + 1) % N_CLUSTERS)))
        rows.append((qid((c + 1) % N_CLUSTERS), q))
    return rows


def click_rows(lang):
    rows = []
    for c in range(N_CLUSTERS):
        home = cluster_home(c)
        for i in range(EVENTS_PER_CLUSTER):
            h = 420 - 25 * i
            if home == "de":
                # Sliding schedule: the German share decays with i.
                count = h if lang == "de" else 12 + 6 * i
                if c == 0 and i == 0 and lang == "de":
                    count = 1200
            else:
                # Fixed ratio: shares stay flat across the cluster.
                count = h if lang == "fr" else max(8, round(0.08 * h))
            rows.append((qid(c), eid(c, i), count))
    return rows


def write_tsv(name, header, rows):
    path = OUT / name
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# {header}\n")
        for row in rows:
            f.write("\t".join(str(x) for x in row) + "\n")
    print(f"wrote {path} ({len(rows)} rows)")


CONFIG = """\
# Toy pipeline configuration. Paths are relative to this file.
data.entities = entities.tsv
data.countries = countries.tsv
data.links.de = links_de.tsv
data.links.fr = links_fr.tsv
data.clicks.de = clicks_de.tsv
data.clicks.fr = clicks_fr.tsv
languages = de,fr
output_dir = out
seed = 42
workers = 1
candidate_k = 100

walks.length = 16
walks.per_node = 8
embed.dim = 32
embed.window = 5
embed.negatives = 5
embed.epochs = 3

ltr.trees = 100
ltr.max_leaves = 8
eval.folds = 5
eval.k = 10
eval.recall_min_positives = 10
"""


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    write_tsv("entities.tsv", "id\tlabel\tis_event\tt_s\tt_e\tcoords\tplace_links",
              entity_rows())
    write_tsv("countries.tsv", "lang\tcountry_id\tpolygon",
              [("de", "Q183", DE_BOX), ("fr", "Q142", FR_BOX)])
    for lang in ("de", "fr"):
        write_tsv(f"links_{lang}.tsv", "source\ttarget", link_rows(lang))
        write_tsv(f"clicks_{lang}.tsv", "source\ttarget\tcount", click_rows(lang))
    (OUT / "laser.conf").write_text(CONFIG, encoding="utf-8")
    print(f"wrote {OUT / 'laser.conf'}")


if __name__ == "__main__":
    main()
