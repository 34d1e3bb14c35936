# -*- coding: utf-8 -*-
"""Fixtures compartidas: la instancia de 2 enfermeras / 1 slot y una instancia planted."""
import copy

import pytest

from nurse_model import GenConfig, generate_instance, instance_from_dict

WORKED_DOC = {
    "days": 1,
    "shifts_per_day": 1,
    "undercover_weight": 10,
    "demand": [[1]],
    "nurses": [
        {"patterns": [{"cover": [1], "cost": 2}, {"cover": [0], "cost": 0}]},
        {"patterns": [{"cover": [1], "cost": 1}, {"cover": [0], "cost": 0}]},
    ],
}


@pytest.fixture
def worked_doc():
    return copy.deepcopy(WORKED_DOC)


@pytest.fixture
def worked_instance():
    return instance_from_dict(WORKED_DOC)


@pytest.fixture
def planted_instance():
    return generate_instance(GenConfig(nurses=6, mode="planted", seed=7))
