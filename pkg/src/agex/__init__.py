"""agex: chest-phantom age estimation, ranking, GAN re-aging and reader studies."""

__version__ = "0.1.0"
