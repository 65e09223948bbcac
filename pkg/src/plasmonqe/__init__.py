"""Strong coupling of quantum emitters to plasmonic hot spots of
metallic nanosphere clusters: multiple-scattering Green tensors,
collective decay matrices, vacuum Rabi dynamics, and genuine
multipartite entanglement."""

__version__ = "0.1.0"
