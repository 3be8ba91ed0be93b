#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"
