//! Config-driven experiment runner behind the CLI.
