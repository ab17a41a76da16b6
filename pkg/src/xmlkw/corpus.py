"""Synthetic record corpus generation and corpus scaling.

The generator emits a music-release style document: one root with many
record children. A configurable fraction of records embeds its format
block from a small pool of byte-identical templates (those compress into
shared subtrees), while the rest carry record-unique payloads that can
never be merged. Keyword placement is arranged so that natural benchmark
queries fall into the three standard categories: never-compressed
keywords (image, uri, release), compressed keywords whose common
ancestors stay unique (vinyl with a genre term), and keywords that
co-occur inside the duplicated blocks (description, rpm, 45).
"""

from __future__ import annotations

import math
import random
from array import array
from dataclasses import dataclass

from .doc_model import DocumentTree, parse_path

_COUNTRIES = [
    "US", "UK", "Germany", "France", "Japan", "Italy", "Canada",
    "Spain", "Sweden", "Netherlands", "Australia", "Brazil",
]
_GENRES = [
    "electronic", "rock", "jazz", "funk", "soul", "pop", "folk", "ambient",
]
_NOTE_SENTENCES = [
    "archival transfer from the original master tapes",
    "licensed promotional pressing not intended for resale",
    "remastered edition with restored artwork and inserts",
    "library stock copy catalogued by the national archive",
    "early matrix variant with etched runout inscriptions",
    "deadstock warehouse find in unplayed condition",
]

# Byte-identical format blocks; each contains the co-occurring keywords
# description/rpm/45/vinyl plus variant-specific tokens.
_DUP_BLOCKS = [
    (
        '<formats><format name="vinyl" qty="1"><descriptions>'
        f"<description>{size} 45 rpm vinyl {extra} description</description>"
        f"<description>{style} pressing rpm description notes</description>"
        f"<description>collector vinyl rpm {size} description</description>"
        "</descriptions></format></formats>"
    )
    for size, extra, style in [
        ('7"', "single", "jukebox"),
        ('7"', "EP", "styrene"),
        ('12"', "maxi", "stereo"),
        ('12"', "single", "mono"),
        ('10"', "album", "repress"),
        ('10"', "EP", "misprint"),
        ('7"', "promo", "acetate"),
        ('12"', "club", "picture"),
    ]
]


@dataclass(slots=True)
class CorpusInfo:
    path: str
    records: int
    bytes_written: int
    duplicated_records: int


def generate_corpus(
    path: str,
    *,
    target_bytes: int = 100 * (1 << 20),
    records: int | None = None,
    dup_ratio: float = 0.45,
    seed: int = 42,
) -> CorpusInfo:
    """Write a synthetic corpus to `path`.

    Stops after `records` records when given, otherwise once the file
    reaches `target_bytes`. `dup_ratio` is the probability that a record
    uses a shared format block instead of a unique one.
    """
    if not 0.0 <= dup_ratio <= 1.0:
        raise ValueError("dup_ratio must be within [0, 1]")
    rng = random.Random(seed)
    written = 0
    n = 0
    dup_count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:

        def emit(text: str) -> None:
            nonlocal written
            fh.write(text)
            written += len(text)

        emit('<?xml version="1.0" encoding="UTF-8"?>\n<releases>\n')
        while True:
            if records is not None:
                if n >= records:
                    break
            elif written >= target_bytes:
                break
            uid = f"{n:07d}"
            if rng.random() < dup_ratio:
                payload = rng.choice(_DUP_BLOCKS)
                dup_count += 1
            else:
                payload = (
                    "<media><track>compact disc album take-"
                    f"{uid} studio session</track></media>"
                )
            sentence = rng.choice(_NOTE_SENTENCES)
            reps = max(1, 560 // (len(sentence) + 1))
            notes = " ".join([sentence] * reps)
            genre1, genre2 = rng.sample(_GENRES, 2)
            emit(
                f'<release id="r{uid}" status="Accepted">\n'
                f"<title>Album u{uid}</title>\n"
                f'<image type="primary" uri="img-{uid}.jpg"/>\n'
                f"<country>{rng.choice(_COUNTRIES)}</country>\n"
                f"<released>{1950 + rng.randrange(70)}</released>\n"
                f"<genres><genre>{genre1}</genre><genre>{genre2}</genre></genres>\n"
                f"{payload}\n"
                f"<notes>{notes}</notes>\n"
                "</release>\n"
            )
            n += 1
        emit("</releases>\n")
    return CorpusInfo(path=path, records=n, bytes_written=written, duplicated_records=dup_count)


def scale_corpus(xml_path: str, fraction: float, out_path: str) -> str:
    """Keep the first ceil(fraction * records) record children of the root.

    The document must be a root element with repeated record children.
    Output is re-serialized (formatting normalized, keyword sets exact).
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    doc = parse_path(xml_path)
    records = [c for c in doc.children(doc.root) if not doc.is_attribute(c)]
    if not records:
        raise ValueError("document has no record children to scale")
    keep = math.ceil(fraction * len(records))
    if keep == len(records):
        truncated = doc
    else:
        # Pre-order contiguity: the kept prefix of records is exactly the
        # ID range up to the first dropped record.
        new_n = records[keep] - 1
        truncated = DocumentTree(
            doc.labels[: new_n + 1],
            array("i", doc.parents[: new_n + 1]),
            doc.keywords[: new_n + 1],
            bytearray(doc.attr_flags[: new_n + 1]),
        )
    with open(out_path, "wb") as fh:
        fh.write(truncated.serialize())
        fh.write(b"\n")
    return out_path
