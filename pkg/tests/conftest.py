import pytest

from casegraph import CaseStore, load_dataset


def make_dataset(ds_id="ds1", n_objects=6, n_links=5):
    objects = [
        {"id": f"{ds_id}-o{i}", "kind": "person" if i % 2 else "account",
         "attributes": {"name": f"entity-{i}"}, "eval": "B2"}
        for i in range(n_objects)
    ]
    links = [
        {"id": f"{ds_id}-r{i}", "sourceId": objects[i]["id"],
         "targetId": objects[(i + 1) % n_objects]["id"], "kind": "linked", "eval": "A2"}
        for i in range(n_links)
    ]
    return {"id": ds_id, "name": f"dataset {ds_id}", "objects": objects,
            "relationships": links}


@pytest.fixture
def dataset_file():
    return make_dataset()


@pytest.fixture
def store(dataset_file):
    store = CaseStore()
    load_dataset(store, dataset_file)
    return store


@pytest.fixture
def document(store):
    return store.create_document("investigation", ["ds1"], "u1")
