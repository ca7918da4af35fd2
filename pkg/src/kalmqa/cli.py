"""Command-line interface: ``kalmqa <command> ...``."""
import argparse
import sys
from pathlib import Path

from .audit import audit_line, format_record, parse_label_line
from .drs import parse_cnl, render_drs
from .engine import evaluate, ingest_kb
from .errors import KalmError
from .frameparser import parse_sentence
from .frames import default_frames, load_frames
from .learner import LvpStore, learn_lvp, load_annotations, lvp_stats
from .paraphrase import _read_data, paraphrase, render_tokens
from .pipeline import interpret, load_resources
from .templates import group_by_template
from .ulrq import build_ulrq, render_query


class FileFailure(Exception):
    """A required input could not be read or loaded."""


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFailure(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise FileFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def _optional(path):
    return None if path is None else _read(path)


def _resources(args):
    try:
        return load_resources(_read(args.kb), _optional(args.lvps), _optional(args.frames),
                              _optional(args.rules))
    except KalmError as exc:
        raise FileFailure(f"cannot load resources: {exc}") from exc


def _questions(path):
    out = []
    for line in _read(path).splitlines():
        if line.strip():
            out.append(line.split("\t", 1)[0])
    return out


def cmd_ingest(args):
    try:
        kb = ingest_kb(_read(args.kb))
    except KalmError as exc:
        raise FileFailure(str(exc)) from exc
    print(f"facts\t{len(kb)}")
    print(f"films\t{len(kb.films)}")
    print(f"titles\t{len(kb.by_name)}")
    shared = sorted(n for n, ids in kb.by_name.items() if len(ids) > 1)
    print(f"shared titles\t{len(shared)}" + (f"\t{'|'.join(shared)}" if shared else ""))


def cmd_learn(args):
    frames = load_frames(_read(args.frames)) if args.frames else default_frames()
    try:
        annotations = load_annotations(_read(args.annotations), frames)
    except KalmError as exc:
        raise FileFailure(str(exc)) from exc
    store = LvpStore()
    failed = 0
    for ann in annotations:
        try:
            learn_lvp(ann, store)
        except (KalmError, ValueError) as exc:
            failed += 1
            print(f"skipped {ann.sentence!r}: {exc}", file=sys.stderr)
    _write(args.out, store.dumps())
    print(f"learned {len(store)} lvps from {len(annotations)} annotations ({failed} skipped)")
    return 1 if failed else 0


def cmd_parse(args):
    tokens = paraphrase(args.sentence)
    print(render_tokens(tokens))
    drs = parse_cnl(tokens)
    print(render_drs(drs))
    store = LvpStore.loads(_read(args.lvps) if args.lvps else _read_data("lvps.pl"))
    parses = parse_sentence(drs, store)
    for p in parses:
        print(p)
    if args.kb:
        res = _resources(args)
        print(render_query(build_ulrq(parses, drs, res.registry, res.role_map, res.frames)))


def _answer_line(question, res):
    try:
        answers = evaluate(interpret(question, res).query, res.kb, res.rules)
    except KalmError as exc:
        return f"{question}\tERROR:{exc.kind}"
    return f"{question}\t{'|'.join(sorted(answers))}"


def cmd_answer(args):
    res = _resources(args)
    lines = [_answer_line(q, res) for q in _questions(args.questions)]
    _write(args.out, "".join(line + "\n" for line in lines))


def cmd_audit(args):
    res = _resources(args)
    records = []
    malformed = 0
    for lineno, line in enumerate(_read(args.questions).splitlines(), 1):
        if not line.strip():
            continue
        try:
            question, expected = parse_label_line(line)
        except ValueError:
            malformed += 1
            print(f"line {lineno}: malformed label line, skipped", file=sys.stderr)
            continue
        records.append(audit_line(question, expected,
                                  lambda q: interpret(q, res).query, res.kb, res.rules))
    out = ["question\tverdict\tcause\texpected\tcomputed"]
    out += [format_record(r) for r in records]
    _write(args.report, "\n".join(out) + "\n")
    flagged = sum(r.verdict == "mislabeled" for r in records)
    print(f"{len(records)} questions, {flagged} mislabeled, {malformed} malformed lines")


def cmd_templates(args):
    res = _resources(args)
    groups = group_by_template(_questions(args.questions), lambda q: interpret(q, res).query)
    out = []
    for text, members in groups.items():
        out.append(f"{len(members)}\t{text}")
        out.extend(f"\t{q}" for q in members)
    distinct = sum(not k.startswith("ERROR:") for k in groups)
    out.append(f"distinct templates\t{distinct}")
    _write(args.out, "\n".join(out) + "\n")


def cmd_stats(args):
    try:
        store = LvpStore.loads(_read(args.lvps))
    except KalmError as exc:
        raise FileFailure(str(exc)) from exc
    frames = load_frames(_read(args.frames)) if args.frames else default_frames()
    stats = lvp_stats(store, frames)
    for frame, a, b, n in stats.rows:
        print(f"{frame}\t{a}\t{b}\t{n}")
    print(f"lvps\t{len(store)}")
    print(f"role-pair lvp triples\t{stats.triples}")
    print(f"bridge rules at two per triple\t{stats.bridge_rules}")


def _add_resources(p, kb_required=True):
    p.add_argument("--kb", required=kb_required, help="Name|relation|Value triple file")
    p.add_argument("--lvps", help="lvp store (default: bundled)")
    p.add_argument("--frames", help="frame definitions (default: bundled)")
    p.add_argument("--rules", help="background rules, one CNL sentence per line (default: bundled)")


def build_parser():
    parser = argparse.ArgumentParser(prog="kalmqa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a triple file and report its size")
    p.add_argument("--kb", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("learn", help="learn lvps from annotations")
    p.add_argument("--annotations", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--frames")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("parse", help="show paraphrase, DRS, candidate parses and query")
    p.add_argument("sentence")
    _add_resources(p, kb_required=False)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("answer", help="answer a batch of questions")
    p.add_argument("--questions", required=True)
    p.add_argument("--out", required=True)
    _add_resources(p)
    p.set_defaults(func=cmd_answer)

    p = sub.add_parser("audit", help="compare labels with computed answers")
    p.add_argument("--questions", required=True)
    p.add_argument("--report", required=True)
    _add_resources(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("templates", help="group questions by query template")
    p.add_argument("--questions", required=True)
    p.add_argument("--out", required=True)
    _add_resources(p)
    p.set_defaults(func=cmd_templates)

    p = sub.add_parser("stats", help="lvp counts per role pair")
    p.add_argument("--lvps", required=True)
    p.add_argument("--frames")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args) or 0
    except FileFailure as exc:
        print(f"kalmqa: {exc}", file=sys.stderr)
        return 1
    except KalmError as exc:
        print(f"kalmqa: {exc.kind}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
