import pytest

from moralmap.taxonomy import (
    Foundation,
    Polarity,
    TaxonomyError,
    default_taxonomy,
    load_taxonomy,
)


def test_default_has_twelve_frames_over_six_foundations():
    tax = load_taxonomy(None)
    assert len(tax.frames) == 12
    assert len({f.foundation for f in tax.frames}) == 6


def test_freedom_alias_resolves_to_liberty_virtue():
    tax = default_taxonomy()
    frame = tax.resolve("Freedom")
    assert frame.name == "Liberty"
    assert frame.foundation is Foundation.LIBERTY
    assert frame.polarity is Polarity.VIRTUE


def test_bijection_every_frame_has_opposite_partner_same_foundation():
    tax = default_taxonomy()
    for frame in tax.frames:
        partner = tax.vice_partner(frame)
        assert partner is not frame
        assert partner.foundation is frame.foundation
        assert partner.polarity is not frame.polarity
        # partnering is an involution
        assert tax.vice_partner(partner) is frame


def test_duplicate_frame_name_rejected(tmp_path):
    path = tmp_path / "tax.yaml"
    path.write_text(
        "frames:\n"
        "  - {name: Care, foundation: Care, polarity: virtue}\n"
        "  - {name: Care, foundation: Care, polarity: vice}\n"
    )
    with pytest.raises(TaxonomyError, match="duplicate"):
        load_taxonomy(str(path))


def test_foundation_with_single_polarity_rejected(tmp_path):
    path = tmp_path / "tax.yaml"
    path.write_text(
        "frames:\n"
        "  - {name: Care, foundation: Care, polarity: virtue}\n"
        "  - {name: Nurture, foundation: Care, polarity: virtue}\n"
    )
    with pytest.raises(TaxonomyError, match="virtue"):
        load_taxonomy(str(path))


def test_unknown_label_raises_keyerror():
    with pytest.raises(KeyError):
        default_taxonomy().resolve("NotAFrame")


def test_custom_taxonomy_loads(tmp_path):
    path = tmp_path / "tax.yaml"
    path.write_text(
        "frames:\n"
        "  - {name: Solidarity, foundation: Loyalty, polarity: virtue}\n"
        "  - {name: Desertion, foundation: Loyalty, polarity: vice}\n"
        "aliases:\n"
        "  Unity: Solidarity\n"
    )
    tax = load_taxonomy(str(path))
    assert tax.frame_names() == ["Solidarity", "Desertion"]
    assert tax.resolve("Unity").name == "Solidarity"
