from hypothesis import settings

# exact arithmetic makes some examples slow; timing is asserted separately
settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")
