import time

import pytest

from kioskbot.adaptation import (
    PhraseTable,
    RemoteEndpoint,
    RemoteError,
    RemoteSimplifier,
    RemoteTranslator,
    SimplifierLexicon,
    UnsupportedLanguage,
)
from kioskbot.adaptation.stubs import stub_simplifier_server, stub_translator_server

LEXICON = SimplifierLexicon(split_conjunctions=("weil",))
TABLE = PhraseTable.from_phrases("de", "da", {"guten tag": "god dag"})

FAST = dict(attempt_timeout_s=0.3, total_deadline_s=1.0)


class TestRemoteTranslator:
    def test_success_with_provenance(self):
        with stub_translator_server(TABLE) as stub:
            client = RemoteTranslator(RemoteEndpoint(stub.base_url, **FAST))
            result = client.translate("Guten Tag", "de", "da")
        assert result.text == "god dag"
        assert result.output_language == "da"
        assert result.steps[0].engine_id == "remote-translator"
        assert stub.request_count == 1

    def test_503_twice_gives_unavailable_after_one_retry(self):
        with stub_translator_server(TABLE, forced_statuses=[503, 503]) as stub:
            client = RemoteTranslator(RemoteEndpoint(stub.base_url, **FAST))
            with pytest.raises(RemoteError) as excinfo:
                client.translate("Guten Tag", "de", "da")
            assert stub.request_count == 2
        assert excinfo.value.kind == "unavailable"
        assert excinfo.value.status == 503

    def test_503_then_success_recovers(self):
        with stub_translator_server(TABLE, forced_statuses=[503]) as stub:
            client = RemoteTranslator(RemoteEndpoint(stub.base_url, **FAST))
            result = client.translate("Guten Tag", "de", "da")
            assert stub.request_count == 2
        assert result.text == "god dag"

    def test_timeout_after_retry(self):
        with stub_translator_server(TABLE, delay_s=0.6) as stub:
            client = RemoteTranslator(RemoteEndpoint(stub.base_url, **FAST))
            started = time.monotonic()
            with pytest.raises(RemoteError) as excinfo:
                client.translate("Guten Tag", "de", "da")
            elapsed = time.monotonic() - started
            assert stub.request_count <= 2
        assert excinfo.value.kind == "timeout"
        assert elapsed <= 5.0

    def test_4xx_is_not_retried(self):
        with stub_translator_server(TABLE, forced_statuses=[418]) as stub:
            client = RemoteTranslator(RemoteEndpoint(stub.base_url, **FAST))
            with pytest.raises(RemoteError) as excinfo:
                client.translate("Guten Tag", "de", "da")
            assert stub.request_count == 1
        assert excinfo.value.kind == "http"
        assert excinfo.value.status == 418

    def test_unadvertised_target_fails_locally(self):
        with stub_translator_server(TABLE) as stub:
            client = RemoteTranslator(RemoteEndpoint(stub.base_url, **FAST))
            with pytest.raises(UnsupportedLanguage):
                client.translate("Guten Tag", "de", "fr")
            assert stub.request_count == 0

    def test_wire_request_shape(self):
        seen = {}

        def spy(payload):
            seen.update(payload)
            return {"translations": [{"text": "ok"}]}

        from kioskbot.adaptation.stubs import StubServer

        with StubServer({"/v2/translate": spy}) as stub:
            RemoteTranslator(RemoteEndpoint(stub.base_url, **FAST)).translate("hi", "de", "da")
        assert seen == {"text": ["hi"], "target_lang": "DA"}

    def test_malformed_body_is_protocol_error(self):
        from kioskbot.adaptation.stubs import StubServer

        with StubServer({"/v2/translate": lambda p: {"nope": 1}}) as stub:
            client = RemoteTranslator(RemoteEndpoint(stub.base_url, **FAST))
            with pytest.raises(RemoteError) as excinfo:
                client.translate("hi", "de", "da")
        assert excinfo.value.kind == "protocol"


class TestRemoteSimplifier:
    def test_success(self):
        with stub_simplifier_server(LEXICON) as stub:
            client = RemoteSimplifier(RemoteEndpoint(stub.base_url, **FAST))
            result = client.simplify("Er bleibt hier, weil es stark regnet.", "de")
        assert result.text == "Er bleibt hier.\nEs regnet stark."
        assert result.steps[0].engine_id == "remote-simplifier"

    def test_non_german_fails_without_network(self):
        with stub_simplifier_server(LEXICON) as stub:
            client = RemoteSimplifier(RemoteEndpoint(stub.base_url, **FAST))
            with pytest.raises(UnsupportedLanguage):
                client.simplify("Hej med dig.", "da")
            assert stub.request_count == 0

    def test_timeout(self):
        with stub_simplifier_server(LEXICON, delay_s=0.6) as stub:
            client = RemoteSimplifier(RemoteEndpoint(stub.base_url, **FAST))
            with pytest.raises(RemoteError) as excinfo:
                client.simplify("Ein Satz.", "de")
        assert excinfo.value.kind == "timeout"

    def test_wire_request_shape(self):
        seen = {}

        def spy(payload):
            seen.update(payload)
            return {"simplified_text": "ok"}

        from kioskbot.adaptation.stubs import StubServer

        with StubServer({"/v1/simplify": spy}) as stub:
            RemoteSimplifier(RemoteEndpoint(stub.base_url, **FAST)).simplify("Ein Satz.", "de")
        assert seen == {"text": "Ein Satz.", "input_language": "de"}
