"""
PNML reader and writer.

Supported subset: net/page/place/transition/arc, place initialMarking,
arc inscription weights, transition toolspecific activity="$invisible$"
(or an empty name) for silent transitions, and a final marking from
<finalmarkings> or a companion .fm sidecar of place=count lines.
"""

from collections import Counter
from pathlib import Path
from typing import Optional, Union
import logging

from lxml import etree

from ..core.errors import ParseError
from ..core.petri import TAU, LabeledPetriNet, ensure_valid, is_silent

logger = logging.getLogger(__name__)

INVISIBLE = "$invisible$"
SIDECAR_SUFFIX = ".fm"


def _local(element) -> str:
    return etree.QName(element).localname


def _children(element, name: str) -> list:
    return [c for c in element if isinstance(c.tag, str) and _local(c) == name]


def _text(element, path: tuple[str, ...]) -> Optional[str]:
    """Text of the first element reached by local names, e.g. ("name", "text")."""
    node = element
    for name in path:
        found = _children(node, name)
        if not found:
            return None
        node = found[0]
    return (node.text or "").strip()


def _count(raw: Optional[str], element, what: str) -> int:
    if raw is None or raw == "":
        return 1 if what == "inscription" else 0
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"{what} {raw!r} is not an integer", element.sourceline, _local(element))
    if value < 0:
        raise ParseError(f"{what} {raw!r} is negative", element.sourceline, _local(element))
    return value


def parse_sidecar(text: str) -> dict[str, int]:
    """Final marking from place=count lines; '#' starts a comment."""
    marking: dict[str, int] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        place, sep, raw = line.partition("=")
        place = place.strip()
        if not place:
            raise ParseError(f"sidecar entry {line!r} has no place", number)
        try:
            marking[place] = marking.get(place, 0) + (int(raw) if sep else 1)
        except ValueError:
            raise ParseError(f"sidecar count {raw.strip()!r} is not an integer", number)
    return marking


def read_pnml(data: bytes, sidecar: Optional[str] = None, validate: bool = True) -> LabeledPetriNet:
    """
    Parse a PNML document into a labeled net.
    The sidecar text is only consulted when the document carries no
    <finalmarkings> element.
    """
    try:
        root = etree.fromstring(data, parser=etree.XMLParser(resolve_entities=False))
    except etree.XMLSyntaxError as e:
        raise ParseError(f"malformed PNML: {e.msg}", e.lineno)

    nets = [n for n in root.iter() if isinstance(n.tag, str) and _local(n) == "net"]
    if not nets:
        raise ParseError("document contains no <net>", root.sourceline, _local(root))
    if len(nets) > 1:
        logger.warning("PNML holds %d nets, reading the first", len(nets))
    net_el = nets[0]

    places: list[str] = []
    transitions: list[str] = []
    labeling: dict[str, str] = {}
    arcs: list[tuple[str, str]] = []
    initial: dict[str, int] = {}
    final: Optional[dict[str, int]] = None

    for element in net_el.iter():
        if not isinstance(element.tag, str):
            continue
        kind = _local(element)
        if kind == "place" and _local(element.getparent()) == "marking":
            continue
        if kind in ("place", "transition", "arc") and element.get("id") is None:
            raise ParseError(f"<{kind}> without id", element.sourceline, kind)

        if kind == "place":
            pid = element.get("id")
            places.append(pid)
            tokens = _count(_text(element, ("initialMarking", "text")), element, "initial marking")
            if tokens:
                initial[pid] = tokens

        elif kind == "transition":
            tid = element.get("id")
            transitions.append(tid)
            name = _text(element, ("name", "text")) or ""
            invisible = any(
                ts.get("activity") == INVISIBLE for ts in _children(element, "toolspecific")
            )
            labeling[tid] = TAU if invisible or not name else name

        elif kind == "arc":
            source, target = element.get("source"), element.get("target")
            if source is None or target is None:
                raise ParseError("arc without source or target", element.sourceline, kind)
            weight = _count(_text(element, ("inscription", "text")), element, "inscription")
            arcs.extend([(source, target)] * weight)

        elif kind == "finalmarkings":
            markings = _children(element, "marking")
            if len(markings) > 1:
                logger.warning("PNML lists %d final markings, using the first", len(markings))
            final = {}
            for place in _children(markings[0], "place") if markings else []:
                ref = place.get("idref")
                if ref is None:
                    raise ParseError("final marking place without idref", place.sourceline, "place")
                tokens = _count(_text(place, ("text",)), place, "final marking")
                if tokens:
                    final[ref] = tokens

    if final is None:
        if sidecar is None:
            raise ParseError("no <finalmarkings> in document and no sidecar given")
        final = parse_sidecar(sidecar)

    name = net_el.get("id") or _text(net_el, ("name", "text")) or "net"
    net = LabeledPetriNet(places, transitions, arcs, labeling, initial, final, name=name)
    logger.debug("read PNML %s: %d places, %d transitions", name, len(places), len(transitions))
    return ensure_valid(net) if validate else net


def load_pnml(path: Union[str, Path]) -> LabeledPetriNet:
    """Read a PNML file, picking up a <stem>.fm sidecar when present."""
    path = Path(path)
    sidecar_path = path.with_suffix(SIDECAR_SUFFIX)
    sidecar = sidecar_path.read_text(encoding="utf-8") if sidecar_path.exists() else None
    return read_pnml(path.read_bytes(), sidecar)


def write_pnml(net: LabeledPetriNet, include_final: bool = True) -> bytes:
    """Serialize a net; arc multiplicities become inscriptions."""
    root = etree.Element("pnml")
    net_el = etree.SubElement(
        root, "net", id=net.name, type="http://www.pnml.org/version-2009/grammar/pnmlcoremodel"
    )
    etree.SubElement(etree.SubElement(net_el, "name"), "text").text = net.name
    page = etree.SubElement(net_el, "page", id="n0")

    for p in net.places:
        place = etree.SubElement(page, "place", id=p)
        etree.SubElement(etree.SubElement(place, "name"), "text").text = p
        tokens = net.initial_names.get(p, 0)
        if tokens:
            etree.SubElement(etree.SubElement(place, "initialMarking"), "text").text = str(tokens)

    for t in net.transitions:
        transition = etree.SubElement(page, "transition", id=t)
        label = net.labeling.get(t, TAU)
        etree.SubElement(etree.SubElement(transition, "name"), "text").text = "" if is_silent(label) else label
        if is_silent(label):
            etree.SubElement(
                transition, "toolspecific", tool="ProM", version="6.4", activity=INVISIBLE
            )

    for i, ((source, target), weight) in enumerate(Counter(net.arcs).items()):
        arc = etree.SubElement(page, "arc", id=f"a{i}", source=source, target=target)
        if weight != 1:
            etree.SubElement(etree.SubElement(arc, "inscription"), "text").text = str(weight)

    if include_final:
        marking = etree.SubElement(etree.SubElement(net_el, "finalmarkings"), "marking")
        for p, tokens in net.final_names.items():
            etree.SubElement(etree.SubElement(marking, "place", idref=p), "text").text = str(tokens)

    return etree.tostring(root, pretty_print=True, xml_declaration=True, encoding="UTF-8")


def write_sidecar(net: LabeledPetriNet) -> str:
    return "".join(f"{p}={c}\n" for p, c in net.final_names.items())
