"""Inc-equivariant presentations of modules over the infinite exterior algebra."""
