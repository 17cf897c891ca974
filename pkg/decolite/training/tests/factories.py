from factory import Factory, SubFactory

from decolite.lite.tests.factories import TinyArchitectureFactory
from decolite.training.config import TrainConfig


class TrainConfigFactory(Factory):
    epochs = 5
    batch_size = 16
    seed = 0
    architecture = SubFactory(TinyArchitectureFactory)

    class Meta:
        model = TrainConfig
