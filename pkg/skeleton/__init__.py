# Skeleton Package
