# Planar Map Package
