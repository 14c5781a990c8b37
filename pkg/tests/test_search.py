from __future__ import annotations

import random

import pytest

from verdd.errors import QueryError
from verdd.search import (
    CharClasses,
    Query,
    RelationQuery,
    execute,
    execute_relations,
    execute_unpaginated,
    neighbors,
    sort_key,
)
from verdd.store import LexiconStore

from oracles import naive_search

SKOLT_CLASSES = CharClasses.from_strings("aâäåeioõu", "bcčʒǯdđfgǧǥhjklmnŋprsštvzž")


@pytest.fixture
def store():
    s = LexiconStore.in_memory()
    for lemma in ["kuss", "kuâll", "puäʒʒ", "puk"]:
        s.upsert_lexeme(lemma, "sms", "N")
    return s


def ids_by_lemma(store):
    return {lx.lemma: lx.id for lx in store.lexemes()}


def test_sort_keys():
    assert sort_key("assonance", "veʹrdd", SKOLT_CLASSES) == "e"
    assert sort_key("consonance", "veʹrdd", SKOLT_CLASSES) == "vrdd"
    assert sort_key("ending", "kuss", SKOLT_CLASSES) == "ssuk"


def test_regex_filter(store):
    page = execute(Query(lemma_pattern="^ku", lemma_mode="regex"), store, SKOLT_CLASSES)
    by = ids_by_lemma(store)
    assert set(page.items) == {by["kuss"], by["kuâll"]}
    assert page.total == 2


def test_exact_and_substring(store):
    assert execute(Query(lemma_pattern="kuss"), store).total == 1
    assert execute(Query(lemma_pattern="uâ", lemma_mode="substring"), store).total == 1


def test_assonance_groups_equal_keys_contiguously(store):
    by = ids_by_lemma(store)
    ids = execute_unpaginated(Query(sort="assonance"), store, SKOLT_CLASSES)
    # keys: kuss->u, puk->u, kuâll->uâ, puäʒʒ->uä
    assert ids == [by["kuss"], by["puk"], by["kuâll"], by["puäʒʒ"]]


def test_verified_filter_empty(store):
    assert execute(Query(verified=True), store).total == 0


def test_invalid_regex_rejected(store):
    with pytest.raises(QueryError):
        execute(Query(lemma_pattern="(", lemma_mode="regex"), store)


def test_backreference_rejected(store):
    with pytest.raises(QueryError):
        execute(Query(lemma_pattern=r"(a)\1", lemma_mode="regex"), store)


def test_page_bounds(store):
    with pytest.raises(QueryError):
        execute(Query(page=0), store)
    with pytest.raises(QueryError):
        execute(Query(page_size=0), store)
    with pytest.raises(QueryError):
        execute(Query(page_size=501), store)


def test_pagination_partition(store):
    for i in range(20):
        store.upsert_lexeme(f"word{i:02d}", "sms", "N")
    all_ids = execute_unpaginated(Query(), store, SKOLT_CLASSES)
    collected = []
    page_no = 1
    while True:
        page = execute(Query(page=page_no, page_size=7), store, SKOLT_CLASSES)
        if not page.items:
            break
        collected.extend(page.items)
        page_no += 1
    assert collected == all_ids
    assert len(set(collected)) == len(collected)


def test_neighbors_follow_query_order(store):
    by = ids_by_lemma(store)
    q = Query(sort="lemma")
    ordered = execute_unpaginated(q, store, SKOLT_CLASSES)
    middle = ordered[1]
    prev_id, next_id = neighbors(q, store, middle, SKOLT_CLASSES)
    assert (prev_id, next_id) == (ordered[0], ordered[2])
    first_prev, first_next = neighbors(q, store, ordered[0], SKOLT_CLASSES)
    assert first_prev is None and first_next == ordered[1]
    assert neighbors(q, store, 9999, SKOLT_CLASSES) == (None, None)
    # filtered out of its own query: graceful (None, None)
    assert neighbors(Query(lemma_pattern="^pu", lemma_mode="regex"), store, by["kuss"], SKOLT_CLASSES) == (None, None)


def test_source_filter(store):
    by = ids_by_lemma(store)
    other, _ = store.upsert_lexeme("lehmä", "fin", "N")
    rel = store.add_relation(by["kuss"], other.id, "translation")
    src = store.get_or_create_source("olddict")
    store.add_attestation(rel.id, src.id, None, editor="x")
    page = execute(Query(source=src.id), store)
    assert set(page.items) == {by["kuss"], other.id}


def test_relation_search_and_pos_filter(store):
    by = ids_by_lemma(store)
    fin1, _ = store.upsert_lexeme("lehmä", "fin", "N")
    verb, _ = store.upsert_lexeme("mennä", "fin", "V")
    r1 = store.add_relation(by["kuss"], fin1.id, "translation")
    r2 = store.add_relation(by["puk"], verb.id, "translation")
    page = execute_relations(RelationQuery(), store)
    assert set(page.items) == {r1.id, r2.id}
    page = execute_relations(RelationQuery(type="derivation"), store)
    assert page.items == []
    page = execute_relations(RelationQuery(left="kuss"), store)
    assert page.items == [r1.id]
    page = execute_relations(RelationQuery(right="mennä"), store)
    assert page.items == [r2.id]


def test_descending_keeps_tiebreak_ascending(store):
    store.upsert_lexeme("kuss", "sms", "N", homonym_index=2)
    ids = execute_unpaginated(Query(sort="lemma", descending=True), store, SKOLT_CLASSES)
    by_id = {lx.id: lx for lx in store.lexemes()}
    lemmas = [by_id[i].lemma for i in ids]
    assert lemmas == sorted(lemmas, reverse=True)
    kuss_ids = [i for i in ids if by_id[i].lemma == "kuss"]
    assert [by_id[i].homonym_index for i in kuss_ids] == [1, 2]


def random_store(rng: random.Random, n: int) -> LexiconStore:
    store = LexiconStore.in_memory()
    syllables = ["ku", "pu", "vä", "so", "må", "ʒi", "čå", "le", "an", "nn", "ss", "k", "ll"]
    with store.batch():
        for _ in range(n):
            lemma = "".join(rng.choices(syllables, k=rng.randint(1, 4)))
            store.upsert_lexeme(
                lemma,
                rng.choice(["sms", "fin"]),
                rng.choice(["N", "V", "A"]),
                homonym_index=rng.choice([1, 1, 1, 2]),
            )
        for lx in store.lexemes():
            if rng.random() < 0.3:
                store.approve("lexeme", lx.id, editor="x")
    return store


def random_query(rng: random.Random) -> Query:
    q = Query()
    roll = rng.random()
    if roll < 0.3:
        q.lemma_mode = "regex"
        q.lemma_pattern = rng.choice(["^ku", "ss$", "k.l", "[aä]n", "pu|so"])
    elif roll < 0.6:
        q.lemma_mode = "substring"
        q.lemma_pattern = rng.choice(["ku", "s", "ll", "å"])
    elif roll < 0.7:
        q.lemma_mode = "exact"
        q.lemma_pattern = "kuss"
    if rng.random() < 0.4:
        q.language = rng.choice(["sms", "fin"])
    if rng.random() < 0.3:
        q.pos = rng.choice(["N", "V"])
    if rng.random() < 0.3:
        q.verified = rng.choice([True, False])
    q.sort = rng.choice(["lemma", "assonance", "consonance", "ending"])
    q.descending = rng.random() < 0.3
    return q


def test_agrees_with_naive_full_scan():
    rng = random.Random(2024)
    store = random_store(rng, 800)
    for _ in range(120):
        q = random_query(rng)
        expected = naive_search(
            store.lexemes(), q, SKOLT_CLASSES.vowels, SKOLT_CLASSES.consonants
        )
        got = execute_unpaginated(q, store, SKOLT_CLASSES)
        assert got == expected, q
