import json

import pytest
from fastapi.testclient import TestClient

from kioskbot.knowledge_base import (
    KBResponse,
    KnowledgeEntry,
    KnowledgeStore,
    LoadError,
    create_kb_app,
    load_store,
)


@pytest.fixture(scope="module")
def store(fixtures_dir):
    return load_store(fixtures_dir / "kb_store.json")


@pytest.fixture(scope="module")
def client(store):
    return TestClient(create_kb_app(store))


class TestLoad:
    def test_empty_store(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text('{"entries": []}')
        assert len(load_store(path)) == 0

    def test_fixture_store_lookup_by_every_keyword(self, store):
        assert len(store) == 5
        for entry in store.entries:
            for keyword in entry.keywords:
                response = store.lookup(keyword, entry.language)
                assert response.found and response.topic == entry.topic_key

    def test_missing_file(self, tmp_path):
        with pytest.raises(LoadError, match="not found"):
            load_store(tmp_path / "nope.json")

    def test_malformed_document(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(LoadError, match="not valid JSON"):
            load_store(path)

    def test_duplicate_topic_key(self):
        entry = KnowledgeEntry(
            id="a", topic_key="t", language="de", answer_text="x", keywords=("k",)
        )
        twin = KnowledgeEntry(
            id="b", topic_key="t", language="de", answer_text="y", keywords=("k2",)
        )
        with pytest.raises(LoadError, match="duplicate topic_key"):
            KnowledgeStore([entry, twin])

    def test_same_topic_key_other_language_allowed(self):
        entry = KnowledgeEntry("a", "t", "de", "x", ("k",))
        twin = KnowledgeEntry("b", "t", "da", "y", ("k",))
        assert len(KnowledgeStore([entry, twin])) == 2

    def test_empty_answer_rejected(self):
        with pytest.raises(LoadError, match="empty answer_text"):
            KnowledgeStore([KnowledgeEntry("a", "t", "de", "", ("k",))])


class TestLookup:
    def test_known_keyword(self, store):
        response = store.lookup("residence permit", "de")
        assert response.found
        assert response.topic == "residence_permit"
        assert "Aufenthaltstitel" in response.answer

    def test_unknown_term(self, store):
        assert store.lookup("zzz", "de") == KBResponse(term="zzz", found=False)

    def test_case_variant(self, store):
        upper = store.lookup("Residence PERMIT", "de")
        lower = store.lookup("residence permit", "de")
        assert upper.term == "Residence PERMIT"  # echoed verbatim
        assert (upper.found, upper.topic, upper.answer) == (lower.found, lower.topic, lower.answer)

    def test_language_filter(self, store):
        assert not store.lookup("residence permit", "da").found

    def test_wildcard_language(self, store):
        assert store.lookup("residence permit", None).found


class TestEndpoint:
    def test_found(self, client, store):
        response = client.get("/kb", params={"term": "residence permit", "lang": "de"})
        assert response.status_code == 200
        body = response.json()
        assert body["found"] is True and body["topic"] == "residence_permit"

    def test_missing_term_is_400(self, client):
        assert client.get("/kb").status_code == 400

    def test_not_found_is_200(self, client):
        response = client.get("/kb", params={"term": "zzz", "lang": "de"})
        assert response.status_code == 200
        assert response.json() == {"term": "zzz", "found": False}

    def test_wire_body_matches_in_process_bytes(self, client, store):
        for term in ("residence permit", "zzz", "Öffnungszeiten"):
            wire = client.get("/kb", params={"term": term, "lang": "de"}).content
            assert wire == store.lookup(term, "de").to_json_bytes()

    def test_wire_json_is_utf8_unescaped(self, client):
        raw = client.get("/kb", params={"term": "öffnungszeiten", "lang": "de"}).content
        assert "ö".encode("utf-8") in raw
        json.loads(raw.decode("utf-8"))
