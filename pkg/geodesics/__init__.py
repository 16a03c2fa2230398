# Geodesics Package
