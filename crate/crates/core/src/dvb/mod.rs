//! DVB QPSK transmit chain, channel and link simulation.
