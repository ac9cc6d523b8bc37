"""HTTP routers for the search API."""
