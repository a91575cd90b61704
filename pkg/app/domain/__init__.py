"""Domain layer containing geometry, tessellations and tree bounds."""
