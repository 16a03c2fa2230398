# Samplers Package
